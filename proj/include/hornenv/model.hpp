#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hornenv {

// Ordered, duplicate-free list of variable names. Position i is bit i of
// every Model over this universe.
class VariableUniverse {
 public:
  VariableUniverse() = default;
  explicit VariableUniverse(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& name(std::size_t i) const;
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  // Appends a variable and returns its index; returns the existing index if
  // the name is already declared.
  std::size_t add(std::string name);

  friend bool operator==(const VariableUniverse& a, const VariableUniverse& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

// A subset of the variable universe as a fixed-width bit vector. Also used
// for the index sets making up clause antecedents and consequents.
//
// Ordering is numeric: the model is read as the unsigned integer whose bit i
// is variable i, so the empty model is the smallest.
class Model {
 public:
  static constexpr std::size_t kWordBits = 64;

  Model() = default;
  explicit Model(std::size_t width);
  Model(std::size_t width, std::initializer_list<std::size_t> indices);
  Model(std::size_t width, std::span<const std::size_t> indices);

  // width <= 64; bits above width must be clear.
  static Model from_word(std::size_t width, std::uint64_t bits);
  static Model full(std::size_t width);

  std::size_t width() const noexcept { return width_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool test(std::size_t i) const;
  void set(std::size_t i, bool value = true);
  void reset(std::size_t i) { set(i, false); }

  std::size_t count() const noexcept;
  bool none() const noexcept;
  std::vector<std::size_t> indices() const;

  // Only valid when width <= 64.
  std::uint64_t word() const;

  bool is_subset_of(const Model& other) const;
  bool is_strict_subset_of(const Model& other) const;
  bool intersects(const Model& other) const;

  Model operator&(const Model& other) const;
  Model operator|(const Model& other) const;
  Model& operator&=(const Model& other);
  Model& operator|=(const Model& other);
  Model minus(const Model& other) const;
  Model complement() const;

  friend bool operator==(const Model& a, const Model& b) = default;
  friend std::strong_ordering operator<=>(const Model& a, const Model& b);

 private:
  void require_same_width(const Model& other) const;
  void require_index(std::size_t i) const;

  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ModelHash {
  std::size_t operator()(const Model& m) const noexcept;
};

// "{a,b}" using universe names, "{}" for the empty model.
std::string to_string(const Model& m, const VariableUniverse& vars);
// "0110..." with bit 0 first.
std::string to_bitstring(const Model& m);

// Duplicate-free set of equal-width models kept in ascending Model order.
// When the width fits a machine word a packed mirror is maintained so the
// bulk kernels can scan the set directly.
class ModelSet {
 public:
  ModelSet() = default;
  explicit ModelSet(std::size_t width) : width_(width) {}
  ModelSet(std::size_t width, std::vector<Model> models);

  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return models_.size(); }
  bool empty() const noexcept { return models_.empty(); }

  // Returns true if the model was not already present.
  bool insert(const Model& m);
  bool erase(const Model& m);
  bool contains(const Model& m) const;

  auto begin() const noexcept { return models_.begin(); }
  auto end() const noexcept { return models_.end(); }
  const Model& operator[](std::size_t i) const { return models_[i]; }
  const std::vector<Model>& models() const noexcept { return models_; }

  bool packed_available() const noexcept { return width_ <= Model::kWordBits; }
  std::span<const std::uint64_t> packed() const noexcept { return packed_; }

  friend bool operator==(const ModelSet& a, const ModelSet& b) {
    return a.width_ == b.width_ && a.models_ == b.models_;
  }

 private:
  void require_width(const Model& m) const;

  std::size_t width_ = 0;
  std::vector<Model> models_;
  std::vector<std::uint64_t> packed_;
};

}  // namespace hornenv
