#include <doctest.h>

#include <unordered_set>

#include "hornenv/errors.hpp"
#include "hornenv/model.hpp"

using namespace hornenv;

TEST_CASE("universe keeps declaration order and rejects duplicates") {
  VariableUniverse u({"a", "b", "c"});
  CHECK(u.size() == 3);
  CHECK(u.name(1) == "b");
  CHECK(*u.index_of("c") == 2);
  CHECK_FALSE(u.index_of("z"));
  CHECK(u.add("b") == 1);
  CHECK(u.size() == 3);
  CHECK_THROWS_AS(VariableUniverse({"a", "a"}), UsageError);
  CHECK_THROWS_AS(u.name(3), UsageError);
}

TEST_CASE("set operations") {
  const Model ab(4, {0, 1});
  const Model bc(4, {1, 2});
  CHECK((ab & bc) == Model(4, {1}));
  CHECK((ab | bc) == Model(4, {0, 1, 2}));
  CHECK((ab & ab) == ab);
  CHECK((Model(4, {0}) & Model(4, {1})).none());
  CHECK(ab.minus(bc) == Model(4, {0}));
  CHECK(ab.complement() == Model(4, {2, 3}));
  CHECK(Model(4, {1}).is_subset_of(ab));
  CHECK(Model(4, {1}).is_strict_subset_of(ab));
  CHECK_FALSE(ab.is_strict_subset_of(ab));
  CHECK(ab.is_subset_of(ab));
  CHECK(ab.intersects(bc));
  CHECK(ab.count() == 2);
  CHECK(ab.indices() == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(ab & Model(5), UsageError);
  CHECK_THROWS_AS(Model(3).set(3), UsageError);
}

TEST_CASE("wide models span several words") {
  Model x(130);
  x.set(0);
  x.set(64);
  x.set(129);
  CHECK(x.count() == 3);
  CHECK(x.complement().count() == 127);
  CHECK(Model::full(130).count() == 130);
  Model y = x;
  y.reset(64);
  CHECK(y.is_strict_subset_of(x));
  CHECK(y < x);
  CHECK_THROWS_AS((void)x.word(), UsageError);
}

TEST_CASE("ordering reads the model as an integer with bit i = variable i") {
  const Model empty(3);
  const Model a(3, {0});
  const Model b(3, {1});
  const Model ab(3, {0, 1});
  const Model c(3, {2});
  CHECK(empty < a);
  CHECK(a < b);
  CHECK(b < ab);
  CHECK(ab < c);
  CHECK(Model::from_word(3, 5) == Model(3, {0, 2}));
  CHECK(Model(3, {0, 2}).word() == 5);
  CHECK_THROWS_AS(Model::from_word(3, 8), UsageError);
}

TEST_CASE("string forms") {
  VariableUniverse u({"a", "b", "c"});
  CHECK(to_string(Model(3), u) == "{}");
  CHECK(to_string(Model(3, {0, 2}), u) == "{a,c}");
  CHECK(to_bitstring(Model(3, {0, 2})) == "101");
}

TEST_CASE("model set stays sorted, deduplicated and mirrored") {
  ModelSet s(3);
  CHECK(s.insert(Model(3, {2})));
  CHECK(s.insert(Model(3, {0})));
  CHECK_FALSE(s.insert(Model(3, {0})));
  CHECK(s.insert(Model(3)));
  REQUIRE(s.size() == 3);
  CHECK(s[0] == Model(3));
  CHECK(s[2] == Model(3, {2}));
  REQUIRE(s.packed_available());
  CHECK(std::vector<std::uint64_t>(s.packed().begin(), s.packed().end()) ==
        std::vector<std::uint64_t>{0, 1, 4});
  CHECK(s.erase(Model(3, {0})));
  CHECK_FALSE(s.contains(Model(3, {0})));
  CHECK(std::vector<std::uint64_t>(s.packed().begin(), s.packed().end()) ==
        std::vector<std::uint64_t>{0, 4});
  CHECK_THROWS_AS(s.insert(Model(4)), UsageError);
  CHECK(ModelSet(3, {Model(3, {1}), Model(3), Model(3, {1})}).size() == 2);
}

TEST_CASE("hash distinguishes width and bits") {
  std::unordered_set<Model, ModelHash> seen;
  seen.insert(Model(3, {1}));
  seen.insert(Model(4, {1}));
  seen.insert(Model(3, {1}));
  CHECK(seen.size() == 2);
}
