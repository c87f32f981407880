#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ymlab/lie_algebra.hpp"
#include "ymlab/sampling.hpp"

namespace ymlab {

inline constexpr int kConfigSchemaVersion = 1;

enum class Scenario { HeatFlow, Variational, Recover, Checks, Oracle };

std::string to_string(Scenario s);
std::optional<Scenario> parse_scenario(const std::string& s);

struct InitialData {
  enum class Kind { Zero, Modes, Spectral };
  Kind kind = Kind::Modes;
  std::vector<Mode> modes;
  SpectralSampler spectral;
};

/// Parsed experiment description. Every field has a default; the file only
/// overrides. See README for the key list.
struct ExperimentConfig {
  std::optional<Scenario> scenario;
  GroupName group = GroupName::SU2;
  int n = 16;
  double L = 6.283185307179586;
  double T = 0.25;
  int nodes = 40;
  double gamma = 2.0;
  double cfl_safety = 0.5;
  double a = 0.5;
  double b = 0.75;
  std::vector<double> tau;  // recovery cutoffs; required by the recover scenario
  std::uint64_t seed = 1;
  int snapshot_every = 0;
  InitialData connection;
  InitialData variation;

  bool recover_direct = true;
  double balance_tolerance = 1e-4;

  std::string gfs_calibration;  // "", "calibrate" or a path to an artifact
  std::optional<double> gfs_gamma;
  int calibration_samples = 1000;
  int hardy_samples = 100;
  int gfs_samples = 100;
  bool identities = true;

  /// Sorted key = value dump of every effective setting; the hash input.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// Parses "key = value" lines ('#' comments, blank lines ignored). The first
/// non-comment line must be "schema_version = 1". Unknown keys, duplicates
/// and out-of-range values raise a configuration error naming the line.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

/// Applies one key = value override with the same validation as the parser.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Cross-field validation (ranges, tau within (0, T], power-of-two n).
void validate_config(const ExperimentConfig& cfg);

}  // namespace ymlab
