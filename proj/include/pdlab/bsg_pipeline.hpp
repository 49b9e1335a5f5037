#pragma once
// Popularity selection, the Cauchy-Schwarz intersection step, a
// derandomised Balog-Szemeredi-Gowers extraction with explicit constants,
// and the energy-to-structure chain built on top of them.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pdlab/exact.hpp"
#include "pdlab/fq_set.hpp"

namespace pdlab {

inline constexpr std::size_t kBsgSizeCap = 256;

/// A stage of the structure chain came out empty.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PopularitySelection {
  int part = 1;
  std::vector<std::size_t> selected;  // indices into S, increasing
  Rational lambda;
  Rational mu;
  Rational m;  // cap on f (part 1: 0 when not given)
  Rational w;  // total weight (part 1: |S|)
  /// Part 1: lambda mu / |S|. Part 2: the dyadic level N.
  Rational level;
  Rational mass;       // sum of f w over the selection
  Rational guarantee;  // (1 - lambda) mu, or (1 - lambda) mu / classes
  std::size_t classes = 0;  // part 2: dyadic classes above lambda mu / W
  /// Part 2: mass >= (1 - lambda) mu / log2 M. Can fail when lambda mu / W
  /// is below 2, since then there are more than log2 M classes.
  bool meets_log2_bound = false;
  nlohmann::json to_json() const;
};

/// {x : f(x) >= lambda mu / |S|}. mu defaults to sum f. If m is given the
/// size bound |P| >= (1 - lambda) mu / m is checked as well.
PopularitySelection popularity_level_set(std::span<const std::int64_t> f,
                                         const Rational& lambda,
                                         std::optional<Rational> mu = std::nullopt,
                                         std::optional<std::int64_t> m = std::nullopt);

/// Dyadic class N <= f < 2N with the largest weighted mass, among classes
/// with N >= lambda mu / W. mu defaults to sum f w; requires f <= m.
PopularitySelection popularity_dyadic(std::span<const std::int64_t> f,
                                      std::span<const std::int64_t> w,
                                      const Rational& lambda, std::int64_t m,
                                      std::optional<Rational> mu = std::nullopt);

using IndexSet = boost::dynamic_bitset<>;

struct CsIntersection {
  std::size_t s_size = 0;
  std::size_t t_size = 0;
  Rational delta;
  Rational density;    // sum |T_s| / (|S| |T|)
  Rational threshold;  // delta^2 |T| / 2
  Rational pair_bound;  // delta^2 |S|^2 / 2
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> pair_sizes;  // |T_s cap T_s'|
  nlohmann::json to_json() const;
};

/// All (s, s') with |T_s cap T_s'| >= delta^2 |T| / 2. Throws
/// std::invalid_argument when sum |T_s| < delta |S| |T|.
CsIntersection cs_intersection(const std::vector<IndexSet>& family,
                               std::size_t t_size, const Rational& delta);

struct BsgCertificate {
  FqSet a_prime;  // subset of the first argument
  FqSet b_prime;  // subset of the second argument
  bool swapped = false;  // roles exchanged so that the second set is smaller
  std::size_t a_size = 0, b_size = 0;  // in role order, b_size <= a_size
  std::int64_t energy = 0;
  Rational k_squared{};  // (|A||B|)^3 / E^2
  long double k = 0;
  long double l = 0;   // log2 |B|
  Rational level{};      // dyadic N
  std::size_t graph_edges = 0;
  Rational k0{};         // |A||B| / |G|
  Elem anchor = 0;
  std::size_t anchors_tried = 0;
  std::int64_t min_paths = 0;
  Rational paths_required{};  // |A||B| / (2^12 K0^5)
  std::size_t sumset_size = 0;  // |A' + B'|
  long double a_lower = 0;  // |A| / (16 sqrt2 L K), role order
  long double b_lower = 0;  // |B| / (16 L K)
  long double sumset_upper = 0;  // 2^17 K^3 L^2 (|A||B|)^{1/2}
  bool a_holds = false, b_holds = false, sumset_holds = false;
  bool holds() const { return a_holds && b_holds && sumset_holds; }
  std::size_t a_prime_role() const { return swapped ? b_prime.size() : a_prime.size(); }
  std::size_t b_prime_role() const { return swapped ? a_prime.size() : b_prime.size(); }
  nlohmann::json to_json() const;
};

/// Dyadic level selection on r_{A+B}, then the paths-of-length-3 step with
/// anchors scanned in encoding order. Throws std::invalid_argument when
/// E(A,B) = |A||B|, CostGuardError above kBsgSizeCap and SelfCheckError if
/// no anchor yields a verified candidate.
BsgCertificate bsg_extract(const FqSet& a, const FqSet& b);

struct StructureCertificate {
  Rational k{};
  BigInt energy_sum;  // sum over X of E(A, xi A)
  FqSet b1;           // popular dilates, E(A, bA) >= |A|^3 / (2K)
  std::vector<Elem> extracted{};  // b in B1 with a BSG certificate
  std::vector<Elem> degenerate{};  // b in B1 with E(A, bA) = |A|^2
  Rational cs_delta{};
  std::size_t cs_pairs = 0;
  Elem x0 = 0;    // b*
  FqSet a_prime;  // A_2 at b*
  FqSet x_prime;  // (b*)^{-1} B_2
  Elem a_bar = 0, a_bar_bar = 0;
  std::int64_t pigeon_count = 0;  // #{a2 - a'' = b (a1 - a')}
  Rational tau{};
  std::size_t popular_pairs = 0;  // |P_*|
  Rational n_level{};
  FqSet a_star;
  FqSet a1;  // A_* - a_bar
  // Measured ratios, all over |A1| unless named otherwise.
  Rational a1_plus_xa1{}, a1_minus_xa1{};
  Rational a1_plus_a1{}, a1_minus_a1{};
  Rational a1_density{};  // |A1| / |A|
  Rational x_density{};   // |X'| / |X|
  Rational a_prime_plus{}, a_prime_minus{};  // |A' +- A'| / |A'|
  Rational a_prime_dilate_max{};  // max over X' of |A' +- x A'| / |A'|
  nlohmann::json to_json() const;
};

/// Throws std::invalid_argument when sum_X E(A, xi A) < |A|^3 |X| / K or
/// 0 is in X, and PipelineError when a stage selects nothing.
StructureCertificate energy_to_structure(const FqSet& a, const FqSet& x,
                                         const Rational& k);

}  // namespace pdlab
