#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ymlab/config.hpp"
#include "ymlab/diagnostics.hpp"

namespace ymlab {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
  std::string out_dir = "out";
  std::optional<Scenario> scenario;  // overrides the config's scenario
  std::optional<std::uint64_t> seed;
  std::optional<int> snapshot_every;
  int threads = 0;                   // 0 keeps the OpenMP default
};

struct RunOutcome {
  Scenario scenario = Scenario::HeatFlow;
  DiagnosticsReport report;
  std::vector<std::string> files;  // written, relative to out_dir
  bool pass() const { return report.all_pass(); }
};

/// Runs one scenario and writes its artifacts. Library errors propagate as
/// ymlab::Error; a failed check is reported through the outcome.
RunOutcome run_experiment(ExperimentConfig cfg, const RunOptions& opt);

/// Field built from an initial-data spec; an empty mode list selects a fixed
/// smooth default. `stream` separates connection and variation draws.
FormField build_initial(const InitialData& d, const Grid& grid, const GroupSpec& group,
                        std::uint64_t seed, std::uint64_t stream, bool variation);

/// Smallest T with erfc(sqrt(2 lambda_min T)) < tail for the populated modes
/// of an abelian Coulomb field.
double oracle_horizon(const FormField& A0, double tail);

}  // namespace ymlab
