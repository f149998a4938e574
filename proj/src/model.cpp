#include "hornenv/model.hpp"

#include <algorithm>
#include <bit>

#include "hornenv/errors.hpp"

namespace hornenv {

namespace {

std::size_t word_count(std::size_t width) {
  return (width + Model::kWordBits - 1) / Model::kWordBits;
}

std::uint64_t tail_mask(std::size_t width) {
  const std::size_t rem = width % Model::kWordBits;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

VariableUniverse::VariableUniverse(std::vector<std::string> names) {
  for (auto& n : names) {
    if (n.empty()) throw UsageError("variable names must be non-empty");
    if (index_.count(n) != 0) throw UsageError("duplicate variable name '" + n + "'");
    index_.emplace(n, names_.size());
    names_.push_back(std::move(n));
  }
}

const std::string& VariableUniverse::name(std::size_t i) const {
  if (i >= names_.size()) throw UsageError("variable index out of range");
  return names_[i];
}

std::optional<std::size_t> VariableUniverse::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t VariableUniverse::add(std::string name) {
  if (name.empty()) throw UsageError("variable names must be non-empty");
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const std::size_t idx = names_.size();
  index_.emplace(name, idx);
  names_.push_back(std::move(name));
  return idx;
}

Model::Model(std::size_t width) : width_(width), words_(word_count(width), 0) {}

Model::Model(std::size_t width, std::initializer_list<std::size_t> indices)
    : Model(width, std::span<const std::size_t>(indices.begin(), indices.size())) {}

Model::Model(std::size_t width, std::span<const std::size_t> indices) : Model(width) {
  for (std::size_t i : indices) set(i);
}

Model Model::from_word(std::size_t width, std::uint64_t bits) {
  if (width > kWordBits) throw UsageError("from_word requires width <= 64");
  if (width < kWordBits && (bits >> width) != 0) {
    throw UsageError("bits set beyond model width");
  }
  Model m(width);
  if (!m.words_.empty()) m.words_[0] = bits;
  return m;
}

Model Model::full(std::size_t width) {
  Model m(width);
  for (auto& w : m.words_) w = ~std::uint64_t{0};
  if (!m.words_.empty()) m.words_.back() &= tail_mask(width);
  return m;
}

void Model::require_index(std::size_t i) const {
  if (i >= width_) {
    throw UsageError("variable index " + std::to_string(i) + " out of range for width " +
                     std::to_string(width_));
  }
}

void Model::require_same_width(const Model& other) const {
  if (width_ != other.width_) {
    throw UsageError("model width mismatch (" + std::to_string(width_) + " vs " +
                     std::to_string(other.width_) + ")");
  }
}

bool Model::test(std::size_t i) const {
  require_index(i);
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void Model::set(std::size_t i, bool value) {
  require_index(i);
  const std::uint64_t bit = std::uint64_t{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= bit;
  } else {
    words_[i / kWordBits] &= ~bit;
  }
}

std::size_t Model::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Model::none() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::vector<std::size_t> Model::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    std::uint64_t w = words_[wi];
    while (w != 0) {
      out.push_back(wi * kWordBits + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::uint64_t Model::word() const {
  if (width_ > kWordBits) throw UsageError("word() requires width <= 64");
  return words_.empty() ? 0 : words_[0];
}

bool Model::is_subset_of(const Model& other) const {
  require_same_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool Model::is_strict_subset_of(const Model& other) const {
  return is_subset_of(other) && words_ != other.words_;
}

bool Model::intersects(const Model& other) const {
  require_same_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

Model Model::operator&(const Model& other) const {
  Model out(*this);
  out &= other;
  return out;
}

Model Model::operator|(const Model& other) const {
  Model out(*this);
  out |= other;
  return out;
}

Model& Model::operator&=(const Model& other) {
  require_same_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

Model& Model::operator|=(const Model& other) {
  require_same_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

Model Model::minus(const Model& other) const {
  require_same_width(other);
  Model out(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~other.words_[i];
  return out;
}

Model Model::complement() const {
  Model out(width_);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
  if (!out.words_.empty()) out.words_.back() &= tail_mask(width_);
  return out;
}

std::strong_ordering operator<=>(const Model& a, const Model& b) {
  if (auto c = a.width_ <=> b.width_; c != 0) return c;
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t ModelHash::operator()(const Model& m) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ m.width();
  for (auto w : m.words()) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string to_string(const Model& m, const VariableUniverse& vars) {
  std::string out = "{";
  bool first = true;
  for (auto i : m.indices()) {
    if (!first) out += ',';
    out += i < vars.size() ? vars.name(i) : std::to_string(i);
    first = false;
  }
  out += '}';
  return out;
}

std::string to_bitstring(const Model& m) {
  std::string out(m.width(), '0');
  for (auto i : m.indices()) out[i] = '1';
  return out;
}

ModelSet::ModelSet(std::size_t width, std::vector<Model> models) : width_(width) {
  for (const auto& m : models) require_width(m);
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  models_ = std::move(models);
  if (packed_available()) {
    packed_.reserve(models_.size());
    for (const auto& m : models_) packed_.push_back(m.word());
  }
}

void ModelSet::require_width(const Model& m) const {
  if (m.width() != width_) {
    throw UsageError("model of width " + std::to_string(m.width()) +
                     " does not belong to a set of width " + std::to_string(width_));
  }
}

bool ModelSet::insert(const Model& m) {
  require_width(m);
  auto it = std::lower_bound(models_.begin(), models_.end(), m);
  if (it != models_.end() && *it == m) return false;
  const auto pos = it - models_.begin();
  models_.insert(it, m);
  if (packed_available()) packed_.insert(packed_.begin() + pos, m.word());
  return true;
}

bool ModelSet::erase(const Model& m) {
  require_width(m);
  auto it = std::lower_bound(models_.begin(), models_.end(), m);
  if (it == models_.end() || *it != m) return false;
  const auto pos = it - models_.begin();
  models_.erase(it);
  if (packed_available()) packed_.erase(packed_.begin() + pos);
  return true;
}

bool ModelSet::contains(const Model& m) const {
  if (m.width() != width_) return false;
  return std::binary_search(models_.begin(), models_.end(), m);
}

}  // namespace hornenv
