#pragma once

// Exact energy and product-of-differences moment counts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdlab/exact.hpp"
#include "pdlab/fq_set.hpp"

namespace pdlab {

/// D_x counts are exact only while products of representation counts fit
/// the 64-bit kernels; larger fields are refused.
inline constexpr std::uint32_t kMomentFieldCap = 1u << 14;
inline constexpr std::size_t kCollinearSizeCap = 160;

/// E(A, xi B) = #{(a1, a2, b1, b2) : a1 - a2 = xi (b1 - b2)}, computed as
/// sum_d r_{A-A}(xi d) r_{B-B}(d). Throws std::invalid_argument for xi = 0.
std::int64_t energy(const FqSet& a, Elem xi, const FqSet& b);

struct DilateRow {
  Elem xi;
  std::int64_t energy;
  std::int64_t q_xi;  // E - |A|^2
  Rational e_xi;      // E - |A|^4 / q
};

struct DilateSpectrum {
  TowerPtr field;
  std::size_t set_size = 0;
  std::vector<DilateRow> rows;  // xi = 1 .. q-1 in encoding order

  const DilateRow& at(Elem xi) const { return rows.at(xi - 1); }
  BigInt sum_q() const;
  Rational sum_e() const;
  /// xi,E,Q,E_xi_num,E_xi_den
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Every E(A, xi A) from one r_{A-A} table. Requires |A| >= 2.
DilateSpectrum dilate_spectrum(const FqSet& a);

struct MomentReport {
  BigInt d_times;    // total number of solutions
  BigInt d_zero;     // solutions with both sides 0
  BigInt d_nonzero;  // the rest
  /// Cauchy-Schwarz lower bound (|A||B||C||D|)^2 / D_x for the size of the
  /// product-of-differences set.
  Rational set_lower_bound;
  std::optional<BigInt> collinear;  // T(A) when requested

  nlohmann::json to_json() const;
};

/// D_x(A) = sum_x r(x)^2 with r = r_{A-A} * r_{A-A}.
MomentReport d_times(const FqSet& a);

/// D_x(A, B, C, D): solutions of (a1-b1)(c1-d1) = (a2-b2)(c2-d2).
MomentReport d_times4(const FqSet& a, const FqSet& b, const FqSet& c,
                      const FqSet& d);

struct FourSetBoundReport {
  BigInt d_times;      // D_x(A, B, C, D)
  BigInt star_product;  // D_x(A)^* D_x(B)^* D_x(C)^* D_x(D)^*
  BigInt zero_term;     // 4 |A|^2 |C|^2 |D|^2
  bool holds = false;

  nlohmann::json to_json() const;
};

/// D_x(A,B,C,D) <= (prod of nonzero parts)^{1/4} + 4|A|^2|C|^2|D|^2, checked
/// by raising the remainder to the fourth power. Requires |A| <= |B|,
/// |C| <= |D| and |B| <= |D|.
FourSetBoundReport verify_four_set_bound(const FqSet& a, const FqSet& b,
                                         const FqSet& c, const FqSet& d);

/// T(A) = #{(a1-a2)(a3-a4) = (a1-a5)(a3-a6)} via per-(a1, a3) second
/// moments. Also checks D_x(A) <= |A|^2 T(A) when q permits D_x.
/// Throws CostGuardError above `size_cap`.
BigInt collinear_energy(const FqSet& a, std::size_t size_cap = kCollinearSizeCap);

struct BktReport {
  BigInt energy_sum;  // sum over S of E(A, xi B)
  BigInt bound;       // |A|^2 |B|^2 + |S| |A| |B|
  bool holds = false;
  Elem witness = 0;   // xi in S maximising |A + xi B|
  std::size_t witness_size = 0;
  Rational witness_target;  // min(|S|, |A||B|) / 2
  bool witness_ok = false;

  nlohmann::json to_json() const;
};

/// Sum of energies over S against the bound, plus a large-sumset dilate.
BktReport verify_bkt(const FqSet& a, const FqSet& b, const FqSet& s);

struct PopularDilatesReport {
  Rational k;
  BigInt d_times;
  Rational d_required;   // |A|^8/q + 3 q |A|^5 / K
  bool energy_hypothesis = false;
  bool size_hypothesis = false;  // |A| <= q / (4K)
  std::optional<FqSet> x;        // {xi : Q_xi >= |A|^3 / K}
  Rational lower;                // q / (K |A|)
  Rational upper;                // 4 K q / (3 |A|)
  bool bounds_hold = false;

  bool hypotheses_hold() const { return energy_hypothesis && size_hypothesis; }
  nlohmann::json to_json() const;
};

/// Extracts the popular dilate set when both hypotheses hold; otherwise x is
/// empty and the report carries the measured D_x shortfall.
PopularDilatesReport extract_popular_dilates(const FqSet& a, const Rational& k);

}  // namespace pdlab
