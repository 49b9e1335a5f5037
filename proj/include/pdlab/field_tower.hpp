#pragma once

// Finite field F_{p^r} with canonical base-p element encoding, its subfield
// lattice, Frobenius/trace maps and additive characters.
//
// An element is the integer sum c_i p^i of its coefficient vector in the
// polynomial basis 1, x, ..., x^{r-1} modulo the chosen modulus. The prime
// subfield therefore encodes as 0..p-1 and 1 encodes as 1.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

namespace pdlab {

using Elem = std::uint32_t;

inline constexpr std::uint64_t kDefaultFieldSizeCap = std::uint64_t{1} << 24;

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

class FieldTower {
 public:
  /// Builds F_{p^r} with the lexicographically least monic irreducible
  /// modulus and the least primitive element as generator. Throws
  /// std::invalid_argument for non-prime p, r < 1, or p^r above `size_cap`.
  static TowerPtr build(std::uint32_t p, std::uint32_t r,
                        std::uint64_t size_cap = kDefaultFieldSizeCap);

  /// Parses "p^r" or a bare prime "p".
  static TowerPtr from_spec(const std::string& spec,
                            std::uint64_t size_cap = kDefaultFieldSizeCap);

  std::uint32_t p() const { return p_; }
  std::uint32_t r() const { return r_; }
  std::uint32_t q() const { return q_; }
  /// Coefficients c_0..c_r of the monic modulus.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  Elem generator() const { return generator_; }
  /// Sorted divisors of r.
  const std::vector<std::uint32_t>& subfield_degrees() const {
    return subfield_degrees_;
  }
  bool divides_degree(std::uint32_t k) const {
    return k >= 1 && r_ % k == 0;
  }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t n) const;

  Elem add(Elem x, Elem y) const;
  Elem neg(Elem x) const;
  Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }
  Elem mul(Elem x, Elem y) const {
    if (x == 0 || y == 0) return 0;
    std::uint32_t s = log_[x] + log_[y];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  /// Throws std::domain_error on x = 0.
  Elem inv(Elem x) const;
  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
  Elem pow(Elem x, std::uint64_t e) const;

  /// Discrete logarithm to base generator(); x must be nonzero.
  std::uint32_t dlog(Elem x) const { return log_[x]; }
  /// generator()^k.
  Elem gpow(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }

  /// x^{p^k}.
  Elem frobenius(Elem x, std::uint32_t k) const;
  /// Relative trace to the subfield of degree `down_to_k`:
  /// sum_{i < r/k} x^{p^{k i}}. Throws if k does not divide r.
  Elem trace(Elem x, std::uint32_t down_to_k) const;
  /// Trace from the degree-k subfield containing x down to F_p, as an
  /// integer in [0, p). x must lie in that subfield.
  std::uint32_t trace_to_prime(Elem x, std::uint32_t k) const;
  std::uint32_t abs_trace(Elem x) const { return trace_to_prime(x, r_); }

  bool in_subfield(Elem x, std::uint32_t k) const {
    return frobenius(x, k) == x;
  }

  /// z with z^2 + z = w, or nullopt when Tr(w) = 1. Characteristic 2 only.
  std::optional<Elem> solve_artin_schreier(Elem w) const;
  /// Odd characteristic only.
  bool is_square(Elem x) const;
  /// Whether x is a square inside the degree-k subfield (x must lie there).
  bool is_square_in_subfield(Elem x, std::uint32_t k) const;

  /// exp(2 pi i AbsTr(x)/p).
  std::complex<double> additive_character(Elem x) const;
  /// Canonical character of the degree-k subfield, exp(2 pi i Tr_{F/F_p}(x)/p).
  std::complex<double> subfield_character(Elem x, std::uint32_t k) const;

  /// {p, r, modulus: [c_0..c_r], generator}
  nlohmann::json descriptor() const;
  std::string name() const;

  bool same_field(const FieldTower& other) const {
    return this == &other || (p_ == other.p_ && r_ == other.r_);
  }

 private:
  FieldTower() = default;

  Elem digit_add(Elem x, Elem y) const;
  Elem slow_mul(Elem x, Elem y) const;

  std::uint32_t p_ = 0;
  std::uint32_t r_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  Elem generator_ = 0;
  std::vector<std::uint32_t> subfield_degrees_;
  std::vector<std::uint32_t> pow_p_;  // p^i for i <= r
  std::vector<Elem> exp_;             // g^i, i in [0, q-1)
  std::vector<std::uint32_t> log_;    // log_[x] for x != 0
  std::vector<std::uint32_t> zech_;   // log(1 + g^d); q-1 marks 1 + g^d = 0
  std::uint32_t half_order_ = 0;      // (q-1)/2 for odd q
  // Columns of the F_2-linear map z -> z^2 + z, for Artin-Schreier solves.
  std::vector<Elem> as_columns_;
};

bool is_prime(std::uint64_t n);
/// Distinct prime factors in increasing order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace pdlab
