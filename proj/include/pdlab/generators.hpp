#pragma once
// Seeded random draws and structured test sets.
//
// Random protocol: SplitMix64 in counter mode. Draw i (i = 0, 1, ...) of
// stream s is mix64(s + (i + 1) * 0x9E3779B97F4A7C15). Bounded draws use
// rejection against the largest multiple of n below 2^64. A random n-subset
// is a partial Fisher-Yates shuffle of the sorted universe, taking the first
// n positions. Sub-streams come from derive_seed.

#include <cstdint>
#include <optional>
#include <string>

#include "pdlab/fq_set.hpp"

namespace pdlab {

std::uint64_t mix64(std::uint64_t z);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// Independent stream for (seed, a, b), e.g. (run seed, trial, set index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// n distinct elements of F_q (or F_q^* when allow_zero is false).
FqSet random_subset(const TowerPtr& field, std::size_t n, std::uint64_t seed,
                    bool allow_zero = true);
/// n distinct elements drawn from `universe`.
FqSet random_subset_of(const FqSet& universe, std::size_t n, std::uint64_t seed);

enum class SetKind { subfield, coset, vspace, progression, random };

std::string to_string(SetKind kind);
SetKind parse_set_kind(const std::string& name);

struct SetParams {
  std::uint32_t k = 1;       // subfield degree (subfield, coset, vspace)
  std::uint32_t d = 1;       // basis size (vspace)
  std::optional<Elem> shift;  // coset translate; default least element outside
  std::size_t length = 0;    // progression length
  Elem start = 0;
  Elem step = 1;
  std::size_t n = 0;         // random size
  std::uint64_t seed = 0;
  bool allow_zero = true;
};

/// Throws std::invalid_argument for impossible parameters: k not dividing r,
/// d k > r, a progression that wraps onto itself, n > available elements.
FqSet generate_structured_set(const TowerPtr& field, SetKind kind, const SetParams& params);

/// Span over F_{p^k} of the d lexicographically first independent elements.
FqSet vector_space(const TowerPtr& field, std::uint32_t d, std::uint32_t k);

}  // namespace pdlab
