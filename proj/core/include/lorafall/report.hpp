#ifndef LORAFALL_REPORT_HPP_
#define LORAFALL_REPORT_HPP_

#include <string>
#include <vector>

#include "lorafall/simulator.hpp"

namespace lorafall {

inline constexpr const char* kCsvHeader =
    "t_s,failure_fraction,lambda,active_links,p_cont_time,p_cont_config,"
    "restoration,mem_gain_mb,energy_gain_j,energy_gain_pct,remaining_energy_j,"
    "mean_lifetime_s,survivability,sustainability,se_mem_value,se_mem_label,"
    "se_energy_value,se_energy_label,deadlock";

// One row per step, floats at 6 significant digits, byte-stable.
std::string snapshots_to_csv(std::span<const MetricsSnapshot> snaps,
                             double failure_fraction, int lambda);

std::string snapshots_to_json(std::span<const MetricsSnapshot> snaps,
                              double failure_fraction, int lambda);

// Parses what snapshots_to_json produced; values round-trip exactly.
std::vector<MetricsSnapshot> snapshots_from_json(const std::string& text);

struct SweepCell {
  double failure = 0.0;
  int lambda = 0;
  RunResult result;
};

struct Sweep {
  std::vector<double> failures;
  std::vector<int> lambdas;
  std::vector<SweepCell> cells;  // failures-major, lambdas-minor
  const RunResult& at(std::size_t fi, std::size_t li) const {
    return cells[fi * lambdas.size() + li].result;
  }
};

// Cross product of failure levels and application counts; every run uses the
// base config with failure_fraction / k_apps overridden.
Sweep run_sweep(const ScenarioConfig& base,
                const std::vector<double>& failures = {0.0, 0.5, 1.0},
                const std::vector<int>& lambdas = {10, 20, 30, 40, 50, 60, 70, 80,
                                                   90, 100});

struct ScenarioAggregates {
  double failure = 0.0;
  double p_time = 1.0;             // closure-weighted over the lambda sweep
  double p_config = 1.0;           // mean over lambdas of step means
  double restoration = 0.0;        // mean over lambdas of the terminal level
  double energy_gain_pct = 0.0;    // mean over lambdas of step means
  double mem_gain_pct = 0.0;
  double remaining_per_close = 0.0;  // closure-weighted
  double sustainability = 0.0;       // mean over lambdas of the run value
  double mean_lifetime_ext_s = 0.0;  // mean over lambdas
  std::vector<int> final_links;      // per lambda
  std::vector<double> energy_gain_per_lambda;
  bool any_deadlock = false;
};

std::vector<ScenarioAggregates> aggregate_sweep(const Sweep& sweep);

// fig5.csv .. fig11.csv, one row per lambda, one column per failure level.
void write_figure_files(const Sweep& sweep, const std::string& out_dir);

struct RunManifest {
  double failure = 0.0;
  int lambda = 0;
  std::uint64_t seed = 0;
  std::string artifact_version;
  std::vector<std::string> files;
  double wall_ms = 0.0;
};

// Appends entries to <out_dir>/manifest.json (created on first use).
void append_manifest(const std::string& out_dir,
                     const std::vector<RunManifest>& entries);

void write_text_file(const std::string& path, const std::string& content);

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace lorafall

#endif  // LORAFALL_REPORT_HPP_
