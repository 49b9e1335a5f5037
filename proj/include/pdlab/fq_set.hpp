#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <json.hpp>

#include "pdlab/field_tower.hpp"

namespace pdlab {

/// Subset of F_q stored as a dense bit-vector indexed by element encoding.
class FqSet {
 public:
  explicit FqSet(TowerPtr field);
  FqSet(TowerPtr field, std::span<const Elem> elements);
  FqSet(TowerPtr field, std::initializer_list<Elem> elements);

  static FqSet full(TowerPtr field);
  static FqSet singleton(TowerPtr field, Elem x);

  const TowerPtr& field() const { return field_; }
  const FieldTower& tower() const { return *field_; }

  bool contains(Elem x) const {
    return (words_[x >> 6] >> (x & 63)) & 1;
  }
  void insert(Elem x);
  void erase(Elem x);
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  /// Members in increasing encoding order.
  std::vector<Elem> elements() const;
  Elem min_element() const;

  bool is_subset_of(const FqSet& other) const;
  FqSet set_union(const FqSet& other) const;
  FqSet set_intersection(const FqSet& other) const;
  FqSet set_difference(const FqSet& other) const;

  /// {lambda x + c : x in this}
  FqSet affine_image(Elem lambda, Elem c) const;
  FqSet dilate(Elem lambda) const { return affine_image(lambda, 0); }
  FqSet translate(Elem c) const { return affine_image(1, c); }

  bool operator==(const FqSet& other) const;

  nlohmann::json to_json() const;
  static FqSet from_json(TowerPtr field, const nlohmann::json& j);

 private:
  TowerPtr field_;
  std::vector<std::uint64_t> words_;
};

/// Integer-valued function on F_q, typically a representation count.
struct RepFn {
  TowerPtr field;
  std::vector<std::int64_t> counts;

  explicit RepFn(TowerPtr f);

  std::int64_t operator[](Elem x) const { return counts[x]; }
  std::int64_t total() const;
  FqSet support() const;
  /// Sparse {"encoding": count} map over the support.
  nlohmann::json to_json() const;
};

/// The unique subfield of size p^k, as the fixed set of Frobenius^k.
struct SubfieldHandle {
  std::uint32_t k = 0;
  FqSet elements;

  std::size_t size() const { return elements.size(); }
};

/// Throws std::invalid_argument if k does not divide r.
SubfieldHandle subfield(const TowerPtr& field, std::uint32_t k);

void require_same_field(const FqSet& a, const FqSet& b);

}  // namespace pdlab
