#pragma once

// Product sets of planes V = F + F xi over the cube-root subfield F, the
// difference-pairing criterion in F-coordinates, and Kloosterman sums.

#include <complex>
#include <optional>
#include <vector>

#include "pdlab/exact.hpp"
#include "pdlab/fq_set.hpp"

namespace pdlab {

struct VvInstance {
  TowerPtr field;
  SubfieldHandle sub;  // |F|^3 = q
  Elem xi = 0;         // least element outside F with xi^2 outside F + F xi
  FqSet v;             // F + F xi
  // v = coord_a[v] + coord_b[v] xi for v in V; -1 outside V.
  std::vector<std::int64_t> coord_a, coord_b;

  std::size_t f_size() const { return sub.size(); }
  /// Coordinatewise form (a, b) . (a', b') = a a' + b b' in F.
  Elem dot(Elem x, Elem y) const;
  nlohmann::json to_json() const;
};

/// Throws std::invalid_argument unless 3 divides r.
VvInstance make_vv_instance(const TowerPtr& field);

struct VvCount {
  std::size_t count = 0;    // |V V| by enumeration
  std::size_t formula = 0;  // published closed form for the characteristic
  bool match = false;
  /// (|F|^3 + 2|F|^2 - |F|)/2 in every characteristic. In characteristic 2
  /// this is what the triple count |F|^2 + (|F|-1)(2|F|-1 + (|F|-1)(|F|/2-1))
  /// simplifies to; the published (|F|^3 + |F|^2)/2 undercounts.
  std::size_t triple_count = 0;
  bool match_triple_count = false;
  bool exceeds_half = false;  // 2 |VV| > q
  bool ok() const { return match && exceeds_half; }
  nlohmann::json to_json() const;
};

VvCount vv_exact_count(const VvInstance& inst);
/// (|F|^3 + 2|F|^2 - |F|)/2 for odd p, (|F|^3 + |F|^2)/2 for p = 2.
std::size_t vv_formula(std::uint32_t p, std::size_t f_size);
/// Number of (a, b, c) in F^3 with z^2 - bz + ac reducible over F.
std::size_t vv_triple_count(std::uint32_t p, std::size_t f_size);

/// Whether z^2 - b z + a c has a root in the degree-k subfield. Odd
/// characteristic tests b^2 - 4ac for squareness; characteristic 2 tests
/// b = 0 or Tr(ac / b^2) = 0. a, b, c must lie in the subfield.
bool quadratic_root_criterion(const FieldTower& f, std::uint32_t k, Elem a, Elem b,
                              Elem c);

struct KloostermanValue {
  Elem a = 0, b = 0;
  std::complex<double> value;
  double weil_bound = 0;  // 2 sqrt(|F|)
  bool within_bound = false;  // vacuous for (0, 0)
  nlohmann::json to_json() const;
};

/// sum over x in F^* of psi_F(a x + b / x), psi_F the canonical character of
/// the subfield.
KloostermanValue kloosterman(const FieldTower& f, const SubfieldHandle& sub, Elem a,
                             Elem b);

struct HisReport {
  Elem u = 0, v = 0;
  std::int64_t count = 0;  // sum_x r_{A-A}(x u) r_{A-A}(v / x)
  std::optional<Elem> witness;
  double character_value = 0;  // the same sum through Fourier coefficients
  double tolerance = 0;
  bool character_agrees = false;  // |value - count| <= tolerance
  bool guaranteed = false;        // |A|^4 |F| >= 4 |V|^4
  bool ok() const { return character_agrees && (!guaranteed || witness.has_value()); }
  nlohmann::json to_json() const;
};

/// Precomputed data for repeated pair queries on one A.
class HisContext {
 public:
  HisContext(const VvInstance& inst, const FqSet& a);
  HisReport query(Elem u, Elem v) const;

 private:
  const VvInstance& inst_;
  FqSet a_;
  RepFn diff_;
  std::vector<Elem> f_elems_;
  std::vector<double> weight_;  // |A^(m)|^2 indexed by V element
  std::vector<std::vector<double>> kloost_;  // real part, by F-index pair
  std::vector<std::int64_t> f_index_;
  bool guaranteed_ = false;
};

/// Direct scan for x in F^* with x u and v / x in A - A, checked against the
/// character-sum evaluation of the same count.
HisReport his_pair_exists(const VvInstance& inst, const FqSet& a, Elem u, Elem v);

struct PdaReport {
  std::size_t pda_size = 0;  // |(A-A)(A-A)|
  std::size_t vv_size = 0;
  bool equal = false;
  Rational containment;  // |(A-A)(A-A)| / |VV|
  bool required = false;  // |A|^4 |F| >= 4 |V|^4
  bool ok() const { return !required || equal; }
  nlohmann::json to_json() const;
};

/// Throws std::invalid_argument if A is not inside V.
PdaReport check_pda_equals_vv(const VvInstance& inst, const FqSet& a);

}  // namespace pdlab
