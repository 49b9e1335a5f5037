#include "pdlab/generators.hpp"

#include <stdexcept>
#include <vector>

#include "pdlab/set_algebra.hpp"

namespace pdlab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(seed ^ mix64(a + kGolden)) ^ mix64(b + 2 * kGolden));
}

FqSet random_subset_of(const FqSet& universe, std::size_t n, std::uint64_t seed) {
  auto pool = universe.elements();
  if (n > pool.size()) {
    throw std::invalid_argument("cannot draw " + std::to_string(n) + " elements from " +
                                std::to_string(pool.size()));
  }
  SplitMix64 rng(seed);
  FqSet out(universe.field());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    out.insert(pool[i]);
  }
  return out;
}

FqSet random_subset(const TowerPtr& field, std::size_t n, std::uint64_t seed,
                    bool allow_zero) {
  auto universe = FqSet::full(field);
  if (!allow_zero) universe.erase(0);
  return random_subset_of(universe, n, seed);
}

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::subfield: return "subfield";
    case SetKind::coset: return "coset";
    case SetKind::vspace: return "vspace";
    case SetKind::progression: return "progression";
    case SetKind::random: return "random";
  }
  return "?";
}

SetKind parse_set_kind(const std::string& name) {
  for (auto k : {SetKind::subfield, SetKind::coset, SetKind::vspace,
                 SetKind::progression, SetKind::random}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown set kind '" + name + "'");
}

FqSet vector_space(const TowerPtr& field, std::uint32_t d, std::uint32_t k) {
  if (!field->divides_degree(k)) {
    throw std::invalid_argument("subfield degree " + std::to_string(k) +
                                " does not divide " + std::to_string(field->r()));
  }
  if (d == 0 || static_cast<std::uint64_t>(d) * k > field->r()) {
    throw std::invalid_argument("no " + std::to_string(d) + "-dimensional space over F_" +
                                std::to_string(field->p()) + "^" + std::to_string(k) +
                                " inside " + field->name());
  }
  const auto sub = subfield(field, k);
  FqSet span(field, {0});
  std::uint32_t dim = 0;
  for (Elem e = 1; e < field->q() && dim < d; ++e) {
    if (span.contains(e)) continue;
    FqSet basis = span;
    basis.insert(e);
    span = span_over_subfield(basis, sub);
    ++dim;
  }
  return span;
}

FqSet generate_structured_set(const TowerPtr& field, SetKind kind, const SetParams& params) {
  switch (kind) {
    case SetKind::subfield:
      return subfield(field, params.k).elements;
    case SetKind::coset: {
      const auto sub = subfield(field, params.k);
      Elem shift = 0;
      if (params.shift) {
        shift = *params.shift;
        if (shift >= field->q()) throw std::invalid_argument("coset shift outside the field");
      } else {
        while (shift < field->q() && sub.elements.contains(shift)) ++shift;
        if (shift == field->q()) shift = 0;  // k = r: the only coset is F_q
      }
      return sub.elements.translate(shift);
    }
    case SetKind::vspace:
      return vector_space(field, params.d, params.k);
    case SetKind::progression: {
      if (params.start >= field->q() || params.step >= field->q()) {
        throw std::invalid_argument("progression start or step outside the field");
      }
      FqSet out(field);
      Elem x = params.start;
      for (std::size_t i = 0; i < params.length; ++i) {
        out.insert(x);
        x = field->add(x, params.step);
      }
      if (out.size() != params.length) {
        throw std::invalid_argument("progression of length " + std::to_string(params.length) +
                                    " repeats in " + field->name());
      }
      return out;
    }
    case SetKind::random:
      return random_subset(field, params.n, params.seed, params.allow_zero);
  }
  throw std::invalid_argument("unknown set kind");
}

}  // namespace pdlab
