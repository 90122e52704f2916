#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polysep/config.hpp"
#include "polysep/solvers.hpp"

namespace polysep {

/// Command-line overrides; each replaces the matching config field when set.
struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out;
  std::optional<std::string> method;
  std::optional<double> tol;
  std::optional<std::size_t> resolution;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> family;
  std::optional<std::size_t> size;
};

/// Exit codes: success, I/O/parse/numerical failure, method not applicable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitNotApplicable = 2;

struct CommandResult {
  Json report;
  int exit_code = kExitOk;
  /// Extra artifacts (path, content) written next to the report.
  std::vector<std::pair<std::string, std::string>> files;
};

/// Maps an exception to {"kind", "message"} and an exit code.
std::pair<Json, int> classify_error(const std::exception& e);

SylvesterProblem problem_from_config(const ProblemConfig& cfg);
Json report_to_json(const SolveReport& r);
Json certificate_to_json(const SeparationCertificate& c);
Json poly_to_json(const Poly& p);

CommandResult run_solve(const ProblemConfig& cfg);
/// Artifacts are named <stem>_vp.{pgm,csv} and <stem>_ps<k>.{pgm,csv}.
CommandResult run_region(const ProblemConfig& cfg, const std::string& stem);
CommandResult run_search(const ProblemConfig& cfg);
CommandResult run_eta(const ProblemConfig& cfg);

/// Loads the config, applies overrides, runs the subcommand, writes outputs.
/// Errors are reported in the "error" field and on err; returns the exit code.
int run_command(const std::string& command, const CommandOptions& opts, std::ostream& out,
                std::ostream& err);

}  // namespace polysep
