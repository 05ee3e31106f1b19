#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spec_file.hpp"

namespace ifes::app {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kHypothesisFailure = 2,
  kNoConvergence = 3,
  kInputError = 4,
};

/// Command-line values that replace the [solver] section of a spec.
struct Overrides {
  std::optional<std::string> method;
  std::optional<std::size_t> grid;
  std::optional<std::size_t> levels;
  std::optional<EvalMode> mode;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<double> relaxation;
};

void apply(const Overrides& overrides, SolverConfig& solver);

struct Outcome {
  int exit_code = kOk;
  nlohmann::json report;
  std::string summary;  // short human-readable account
};

struct ScanRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 0;

  /// `steps` samples from lo to hi, both included; one sample is lo.
  std::vector<double> samples() const;
};

/// Parses "lo:hi:steps". Throws SpecError.
ScanRange parse_range(std::string_view text);

/// Writes solution CSV(s) and report.json into out_dir.
Outcome run_solve(const LoadedSpec& spec, const std::filesystem::path& out_dir, std::uint64_t seed);
/// Writes report.json into out_dir; summary holds the text rendering.
Outcome run_check(const LoadedSpec& spec, const std::filesystem::path& out_dir);
/// Recomputes residual, monotonicity and class membership from a CSV alone. Writes verify.json.
Outcome run_verify(const LoadedSpec& spec, const std::filesystem::path& csv,
                   std::optional<EvalMode> mode, const std::filesystem::path& out_dir);
/// `to` is "log" or "reflect". Writes the transformed spec to `output`.
Outcome run_conjugate(const LoadedSpec& spec, const std::string& to,
                      const std::filesystem::path& output);
/// Writes scan.csv into out_dir. Parameters: lambda.k, delta, M, l.k, L.k. With hold_sum,
/// changing lambda.k moves lambda_1 (or lambda_2 when k = 1) the opposite way.
Outcome run_scan(const LoadedSpec& spec, const std::string& param, const ScanRange& range,
                 bool hold_sum, const std::filesystem::path& out_dir);
/// Runs a bundled example with its own method and records the claim being checked.
Outcome run_example(const std::string& name, const Overrides& overrides,
                    const std::filesystem::path& out_dir, std::uint64_t seed);

std::vector<std::string> bundled_spec_names();
std::optional<std::string_view> bundled_spec(std::string_view name);

}  // namespace ifes::app
