#pragma once

// Pivots and involved elements for W, X inside F_q (V = F_q as a line over
// itself).

#include <optional>
#include <vector>

#include "pdlab/exact.hpp"
#include "pdlab/fq_set.hpp"

namespace pdlab {

struct PivotRatios {
  Rational k1;  // |W + XW| / |W|
  Rational k2;  // |W + W| / |W|
  Rational k3;  // max_x |W + xW| / |W|

  /// K1^4 K2 K3^4
  Rational span_product() const;
  /// K1^2 K3^3
  Rational scaling_product() const;
  nlohmann::json to_json() const;
};

PivotRatios measure_ratios(const FqSet& w, const FqSet& x);

/// Whether (v, a) -> v + a xi is injective on W x X.
bool is_pivot(const FqSet& w, const FqSet& x, Elem xi);

/// |W + X xi|
std::size_t dilate_sumset_size(const FqSet& w, const FqSet& x, Elem xi);

struct InvolvedWitness {
  Elem xi;
  Elem alpha1, alpha2;
  Elem v1, v2;  // xi = (alpha1 - alpha2)^{-1} (v2 - v1)
};

struct InvolvedReport {
  FqSet involved;
  FqSet span;              // span of W over <X>
  std::uint32_t subfield_degree = 0;
  std::size_t subfield_size = 0;
  PivotRatios ratios;
  bool hypotheses_hold = false;  // K1^4 K2 K3^4 < |X|
  std::vector<InvolvedWitness> witnesses;  // one per involved element

  nlohmann::json to_json() const;
};

/// Involved elements from the collision formula over (a1 != a2, v1, v2),
/// each confirmed by the injectivity test. Requires W nonempty, X nonempty
/// and 0 not in X. With |X| = 1 nothing is involved.
InvolvedReport involved_set(const FqSet& w, const FqSet& x);

/// Complement of the pivots, by testing every xi in F_q.
FqSet involved_brute_force(const FqSet& w, const FqSet& x);

struct InvolvedBoundReport {
  Elem xi;
  std::size_t size;  // |W + X xi|
  Rational bound;    // K1^2 K3^2 |W|
  bool holds = false;
  Rational slack() const { return bound - Rational(BigInt(size)); }
  nlohmann::json to_json() const;
};

/// Throws std::invalid_argument if xi is a pivot.
InvolvedBoundReport verify_involved_bound(const FqSet& w, const FqSet& x, Elem xi);

struct ClosureReport {
  PivotRatios ratios;
  bool addition_checked = false;
  bool addition_holds = false;
  std::optional<std::pair<Elem, Elem>> addition_violation;
  bool multiplication_checked = false;
  bool multiplication_holds = false;
  std::optional<std::pair<Elem, Elem>> multiplication_violation;  // (scalar, xi)
  std::size_t involved_size = 0;

  /// Whether every check that ran came out clean.
  bool ok() const {
    return (!addition_checked || addition_holds) &&
           (!multiplication_checked || multiplication_holds);
  }
  nlohmann::json to_json() const;
};

/// I +- I within I when K1^4 K2 K3^4 < |X|; x^{+-1} I within I for x in X
/// when K1^2 K3^3 < |X|. Checks whose hypothesis fails are skipped.
ClosureReport verify_closure(const FqSet& w, const FqSet& x);

struct SpanTheoremReport {
  InvolvedReport involved;
  bool involved_in_span = false;
  bool involved_equals_span = false;
  std::uint32_t dimension = 0;  // |span| = |<X>|^d
  Rational size_bound{};        // |span| / (2 K1^2 K3^2)
  bool size_bound_holds = false;
  /// Only meaningful when the hypotheses hold; otherwise report-only.
  bool ok() const {
    return involved_in_span &&
           (!involved.hypotheses_hold || (involved_equals_span && size_bound_holds));
  }
  nlohmann::json to_json() const;
};

SpanTheoremReport verify_span_theorem(const FqSet& w, const FqSet& x);

struct SubfieldDetection {
  SpanTheoremReport theorem;
  bool size_window = false;   // q^{1/4} < |X| < q^{1/2} and q^{1/2} < |W| <= q^{2/3}
  bool cube_subfield = false;  // |<X>|^3 = q
  bool plane = false;          // d = 2
  Rational w_bound{};          // |F|^2 / (2 K1^2 K3^2)
  bool w_bound_holds = false;
  bool ok() const { return theorem.ok() && cube_subfield && plane && w_bound_holds; }
  nlohmann::json to_json() const;
};

/// The subfield-detection specialisation: under the size window and the
/// ratio hypothesis, <X> has size q^{1/3}, W spans a plane over it and
/// |W| >= |F|^2 / (2 K1^2 K3^2).
SubfieldDetection detect_subfield(const FqSet& w, const FqSet& x);

}  // namespace pdlab
