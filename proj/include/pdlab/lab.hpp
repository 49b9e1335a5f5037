#pragma once
// Batch experiment driver behind the `lab` tool.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdlab/fq_set.hpp"

namespace pdlab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kAssertionFailed = 1, kConfigError = 2, kCostGuard = 3 };

struct ExperimentConfig {
  std::string experiment;
  std::string field;  // "p^r" or "p"
  std::uint64_t seed = 0;
  std::string out;    // report directory; empty writes nothing
  /// Named set sources, e.g. {"A", "vspace:2:1"}. See parse_set_spec.
  std::map<std::string, std::string> sets;
  std::optional<std::string> k;  // rational, "3/2" or "1.5"
  std::optional<std::size_t> size;
  std::optional<std::size_t> size2;
  std::optional<std::size_t> trials;
  std::optional<std::uint32_t> subfield_degree;
  std::optional<std::size_t> pairs;
  std::size_t jobs = 1;
  /// Everything except `out` and `jobs`, which do not affect results.
  nlohmann::json to_json() const;
};

struct RunResult {
  int exit_code = kPass;
  nlohmann::json summary;
  std::string detail_csv;
};

const std::vector<std::string>& experiment_names();

/// Set source grammar:
///   list:3,5,7             explicit encodings
///   subfield:k             F_{p^k}
///   coset:k[:shift]        F_{p^k} + shift
///   vspace:d:k             d-dimensional space over F_{p^k}
///   progression:len[:start:step]
///   random:n               n elements drawn with `seed`
///   nonzero:<spec>         the same set with 0 removed (random draws from F_q^*)
/// Throws std::invalid_argument on malformed input.
FqSet parse_set_spec(const TowerPtr& field, const std::string& spec, std::uint64_t seed);

/// Runs one experiment. Never throws: configuration problems, cost-guard
/// refusals and assertion failures all come back as exit codes, with the
/// message under summary["error"]. Writes summary.json and detail.csv when
/// cfg.out is set.
RunResult run(const ExperimentConfig& cfg);

}  // namespace pdlab
