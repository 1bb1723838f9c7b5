#pragma once

// Command-line front end: INI scenario files, run/compare/oracle-check/residuals
// subcommands, CSV and SVG emission.

#include "strapnav/analysis.hpp"
#include "strapnav/navigator.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace navsim {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kNumericalAbort = 3,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlgorithmPair {
  strapnav::VelAlg vel = strapnav::VelAlg::Derived;
  strapnav::PosAlg pos = strapnav::PosAlg::Derived;
};

struct CliConfig {
  strapnav::Scenario<double> scenario = strapnav::Scenario<double>::const_east_default();
  strapnav::EarthModel<double> earth = strapnav::EarthModel<double>::wgs84();
  std::vector<AlgorithmPair> algorithms;
  std::string csv_path = "run.csv";
  std::string ranking_path = "ranking.csv";
  std::string plot_path = "errors.svg";
  bool plot = false;
};

/// Parses an INI file; throws ConfigError on I/O, syntax, unknown keys or
/// values violating the scenario invariants.
CliConfig load_config(const std::string& path);
CliConfig parse_config(std::istream& in);

/// "derived", "sv2" or "vel/pos" such as "sv2/derived".
AlgorithmPair parse_algorithm_pair(const std::string& text);

void write_error_csv(std::ostream& out, const strapnav::RunResult& r);
void write_ranking_csv(std::ostream& out, const std::vector<strapnav::RankingRow>& rows);
void write_residuals_csv(std::ostream& out, const strapnav::AssumptionResiduals& r);
void write_error_svg(std::ostream& out, const std::vector<strapnav::RunResult>& results);

/// Concurrency for compare: NAVSIM_THREADS if set (must be a positive
/// integer), else the hardware concurrency; never more than `jobs`.
unsigned thread_budget(std::size_t jobs);

/// Entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace navsim
