#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdlab/exact.hpp"
#include "pdlab/fq_set.hpp"

namespace pdlab {

enum class SetOp { sum, diff, prod, ratio };

std::string to_string(SetOp op);

/// Exact image {a op b}. Ratio drops pairs with b = 0.
FqSet combine(const FqSet& a, const FqSet& b, SetOp op);

/// counts[x] = #{(a, b) : a op b = x}. Ratio is not supported here.
RepFn rep_function(const FqSet& a, const FqSet& b, SetOp op);

enum class ConvolutionMode {
  automatic,  // direct for q <= 2^13, FFT above
  direct,
  fft,
};

/// Multiplicative convolution out[x] = sum_{u v = x} f(u) g(v). The nonzero
/// part is an additive convolution over Z_{q-1} through the discrete log.
/// The FFT mode rounds to integers and throws std::runtime_error if any
/// rounding error reaches 0.25.
RepFn mul_convolution(const RepFn& f, const RepFn& g,
                      ConvolutionMode mode = ConvolutionMode::automatic);

/// (A - B)(C - D), as the support of r_{A-B} * r_{C-D}.
FqSet products_of_differences(const FqSet& a, const FqSet& b, const FqSet& c,
                              const FqSet& d);

/// Smallest F-linear subspace of F_q containing W.
FqSet span_over_subfield(const FqSet& w, const SubfieldHandle& f);

/// Least subfield containing X. For X within {0} this is the prime subfield.
SubfieldHandle generated_subfield(const FqSet& x);

enum class PlunneckeForm { different_summands, large_subset, triangle, mixed_signs };

std::string to_string(PlunneckeForm form);
PlunneckeForm parse_plunnecke_form(const std::string& name);

struct PlunneckeReport {
  PlunneckeForm form;
  std::size_t h = 0;
  /// Left side cardinality. For mixed signs it is the worst sign pattern.
  BigInt lhs_size;
  /// Right side as an exact rational: (prod |A + B_i| / |A|) |A|, times 2^h
  /// for the large-subset form.
  Rational rhs;
  bool holds = false;
  /// Large-subset form only.
  std::optional<std::vector<Elem>> witness;
  std::string witness_search;  // "full-set", "greedy", "exhaustive" or "none"
  /// Mixed-signs form: sign pattern of the worst case, '+'/'-' per summand
  /// after the first.
  std::string worst_signs;

  /// lhs over the product of the |A + B_i|/|A| factors times |A|. The 2^h
  /// allowance of the large-subset form is left out, so cosets give 1.
  Rational ratio() const;
  nlohmann::json to_json() const;
};

/// Evaluates one sumset inequality exactly. The triangle form uses B_1, B_2;
/// the others use all of `bs`.
PlunneckeReport verify_plunnecke_ruzsa(const FqSet& a,
                                       std::span<const FqSet> bs,
                                       PlunneckeForm form);

}  // namespace pdlab
