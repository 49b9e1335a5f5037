#include "pdlab/fq_set.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace pdlab {

FqSet::FqSet(TowerPtr field)
    : field_(std::move(field)), words_((field_->q() + 63) / 64, 0) {}

FqSet::FqSet(TowerPtr field, std::span<const Elem> elements)
    : FqSet(std::move(field)) {
  for (Elem x : elements) insert(x);
}

FqSet::FqSet(TowerPtr field, std::initializer_list<Elem> elements)
    : FqSet(std::move(field)) {
  for (Elem x : elements) insert(x);
}

FqSet FqSet::full(TowerPtr field) {
  FqSet s(std::move(field));
  for (Elem x = 0; x < s.field_->q(); ++x) s.insert(x);
  return s;
}

FqSet FqSet::singleton(TowerPtr field, Elem x) {
  FqSet s(std::move(field));
  s.insert(x);
  return s;
}

void FqSet::insert(Elem x) {
  if (x >= field_->q()) {
    throw std::out_of_range("element " + std::to_string(x) +
                            " outside F_" + std::to_string(field_->q()));
  }
  words_[x >> 6] |= std::uint64_t{1} << (x & 63);
}

void FqSet::erase(Elem x) {
  if (x < field_->q()) words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
}

std::size_t FqSet::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

std::vector<Elem> FqSet::elements() const {
  std::vector<Elem> out;
  out.reserve(size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      const int b = std::countr_zero(w);
      out.push_back(static_cast<Elem>(i * 64 + b));
      w &= w - 1;
    }
  }
  return out;
}

Elem FqSet::min_element() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) {
      return static_cast<Elem>(i * 64 + std::countr_zero(words_[i]));
    }
  }
  throw std::domain_error("min_element of empty set");
}

bool FqSet::is_subset_of(const FqSet& other) const {
  require_same_field(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

FqSet FqSet::set_union(const FqSet& other) const {
  require_same_field(*this, other);
  FqSet out(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] |= other.words_[i];
  return out;
}

FqSet FqSet::set_intersection(const FqSet& other) const {
  require_same_field(*this, other);
  FqSet out(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= other.words_[i];
  return out;
}

FqSet FqSet::set_difference(const FqSet& other) const {
  require_same_field(*this, other);
  FqSet out(*this);
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~other.words_[i];
  return out;
}

FqSet FqSet::affine_image(Elem lambda, Elem c) const {
  const auto& f = *field_;
  FqSet out(field_);
  for (Elem x : elements()) out.insert(f.add(f.mul(lambda, x), c));
  return out;
}

bool FqSet::operator==(const FqSet& other) const {
  return field_->same_field(*other.field_) && words_ == other.words_;
}

nlohmann::json FqSet::to_json() const { return elements(); }

FqSet FqSet::from_json(TowerPtr field, const nlohmann::json& j) {
  FqSet s(std::move(field));
  for (const auto& v : j) s.insert(v.get<Elem>());
  return s;
}

RepFn::RepFn(TowerPtr f) : field(std::move(f)), counts(field->q(), 0) {}

std::int64_t RepFn::total() const {
  std::int64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

FqSet RepFn::support() const {
  FqSet s(field);
  for (Elem x = 0; x < counts.size(); ++x) {
    if (counts[x] != 0) s.insert(x);
  }
  return s;
}

nlohmann::json RepFn::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (Elem x = 0; x < counts.size(); ++x) {
    if (counts[x] != 0) j[std::to_string(x)] = counts[x];
  }
  return j;
}

SubfieldHandle subfield(const TowerPtr& field, std::uint32_t k) {
  if (!field->divides_degree(k)) {
    throw std::invalid_argument("subfield degree " + std::to_string(k) +
                                " does not divide " +
                                std::to_string(field->r()));
  }
  FqSet elems(field);
  elems.insert(0);
  // F_{p^k}^* is the subgroup generated by g^{(q-1)/(p^k-1)}.
  std::uint64_t sub_size = 1;
  for (std::uint32_t i = 0; i < k; ++i) sub_size *= field->p();
  const std::uint64_t step = (field->q() - 1) / (sub_size - 1);
  for (std::uint64_t j = 0; j + 1 < sub_size; ++j) {
    elems.insert(field->gpow(j * step));
  }
  return SubfieldHandle{k, std::move(elems)};
}

void require_same_field(const FqSet& a, const FqSet& b) {
  if (!a.tower().same_field(b.tower())) {
    throw std::invalid_argument("sets live in different fields (" +
                                a.tower().name() + " vs " + b.tower().name() +
                                ")");
  }
}

}  // namespace pdlab
