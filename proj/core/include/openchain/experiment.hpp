#pragma once

// Configuration files, the figure preset catalog, sweeps and run manifests.
//
// Config format: one key=value per line, '#' starts a comment, blank lines
// are ignored. Keys:
//   N, n, J, delta, channel (none | dephasing | dissipation),
//   Gamma, Gamma1, Gamma2, gamma, gamma1, gamma2 (number, inf or markov),
//   init (neel | allzeros), t_max, dt, sample_every, positivity_guard

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "openchain/dynamics.hpp"

namespace openchain {

/// Parses and validates a config document. Unknown keys and malformed values
/// throw ParseError; invariant violations throw ConfigError.
ChainConfig parse_config(std::string_view text);

/// Inverse of parse_config; every key is written.
std::string format_config(const ChainConfig& cfg);

enum class SweepAxis { Gamma, gamma, n, N, delta };

SweepAxis parse_axis(std::string_view name);
std::string to_string(SweepAxis axis);

/// `base` with `axis` set to `value` (both baths for Gamma / gamma).
ChainConfig apply_axis(ChainConfig base, SweepAxis axis, double value);

struct SweepSpec {
  SweepAxis axis = SweepAxis::gamma;
  std::vector<double> values;
};

struct ExperimentPreset {
  std::string name;
  std::string description;
  std::string quantity;  // column plotted by the figure panel
  ChainConfig base;
  double sample_interval = 0.1;
  std::optional<SweepSpec> sweep;

  /// Every config the preset runs, in order.
  std::vector<ChainConfig> configs() const;
};

/// All presets: one per figure panel (fig2a ... fig17c) followed by the sweep
/// families.
const std::vector<ExperimentPreset>& preset_catalog();

/// Throws ConfigError listing the valid names when `name` is unknown.
const ExperimentPreset& find_preset(std::string_view name);

/// Per-run scalars used by sweep summaries.
struct RunSummary {
  double min_TMI = 0.0;
  double min_TLN = 0.0;
  /// First time after the TLN minimum from which |TLN| < 1e-4 for the rest
  /// of the record; NaN if that never happens.
  double tln_extinction_time = 0.0;
  /// TMI where it first stays within 1e-6 for 5 time units; when that never
  /// happens, the mean over the final 5 time units with steady_reached false.
  double steady_TMI = 0.0;
  double steady_time = 0.0;
  bool steady_reached = false;
};

inline constexpr double kExtinctionThreshold = 1e-4;
inline constexpr double kSteadyTolerance = 1e-6;
inline constexpr double kSteadyWindow = 5.0;

RunSummary summarize(const TrajectoryRecord& record);

struct RunOptions {
  std::optional<double> dt;
  std::optional<double> t_max;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Applies RunOptions overrides. Changing dt keeps the sample interval.
ChainConfig with_overrides(ChainConfig cfg, const RunOptions& options, double sample_interval);

struct RunManifest {
  std::string preset;             // empty for explicit configs
  std::vector<ChainConfig> configs;
  std::vector<std::string> outputs;  // CSV file names inside `outdir`
  std::filesystem::path outdir;
  std::uint64_t seed = 0;
  std::string timestamp;
  std::string version;
  std::optional<SweepSpec> sweep;
  std::string summary;  // summary CSV name for sweeps
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(std::string_view text);

/// Runs one explicit config; writes manifest.json, then <stem>.csv.
RunManifest run_config(const ChainConfig& cfg, const std::filesystem::path& outdir,
                       const RunOptions& options = {}, const std::string& stem = "run");

/// Runs a preset into `outdir`: one CSV per config plus manifest.json, and a
/// summary CSV for sweep presets.
RunManifest run_preset(std::string_view name, const std::filesystem::path& outdir,
                       const RunOptions& options = {});

/// One run per value plus <stem>_summary.csv. Every derived config is
/// validated before any run starts.
RunManifest sweep(const ChainConfig& base, SweepAxis axis, const std::vector<double>& values,
                  const std::filesystem::path& outdir, const RunOptions& options = {},
                  const std::string& stem = "sweep");

/// Re-executes the configs recorded in a manifest into `outdir`.
RunManifest rerun_manifest(const RunManifest& m, const std::filesystem::path& outdir,
                           int jobs = 1);

}  // namespace openchain
