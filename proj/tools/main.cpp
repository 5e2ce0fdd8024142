#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "lorafall/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitDeadlock = 2;
constexpr int kExitInternalError = 3;

struct Options {
  std::string config_path;
  std::optional<double> failure;
  std::optional<int> lambda;
  bool sweep = false;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "results";
  std::string format = "csv";
  bool strict_selection = false;
  bool paper_literal_decay = false;
};

std::string run_name(double failure, int lambda) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "run_f%03d_l%03d",
                static_cast<int>(failure * 100 + 0.5), lambda);
  return buf;
}

int emit_run(const lorafall::ScenarioConfig& cfg, const lorafall::RunResult& result,
             const Options& opt, std::vector<lorafall::RunManifest>& manifests,
             double wall_ms) {
  std::string base = opt.out_dir + "/" + run_name(cfg.failure_fraction, cfg.k_apps);
  std::vector<std::string> files;
  if (opt.format == "json") {
    std::string path = base + ".json";
    lorafall::write_text_file(
        path, lorafall::snapshots_to_json(result.snapshots, cfg.failure_fraction,
                                          cfg.k_apps));
    files.push_back(path);
  } else {
    std::string path = base + ".csv";
    lorafall::write_text_file(
        path, lorafall::snapshots_to_csv(result.snapshots, cfg.failure_fraction,
                                         cfg.k_apps));
    files.push_back(path);
  }
  lorafall::RunManifest m;
  m.failure = cfg.failure_fraction;
  m.lambda = cfg.k_apps;
  m.seed = cfg.seed;
  m.artifact_version = lorafall::kArtifactVersion;
  m.files = std::move(files);
  m.wall_ms = wall_ms;
  manifests.push_back(std::move(m));
  return result.summary.any_deadlock ? kExitDeadlock : kExitOk;
}

void print_summary(const lorafall::ScenarioConfig& cfg,
                   const lorafall::RunSummary& s) {
  std::printf(
      "failure=%.2f lambda=%d links=%d p_time=%.4f p_config=%.4f "
      "restoration=%.5f energy_gain=%.2f%% rem/close=%.5fJ lifetime=%.4fs "
      "sustainability=%.3f deadlock=%s\n",
      cfg.failure_fraction, cfg.k_apps, s.final_active_links, s.avg_p_time,
      s.avg_p_config, s.restoration_final, s.avg_energy_gain_pct,
      s.remaining_per_closing_avg, s.mean_lifetime_ext_s, s.sustainability,
      s.any_deadlock ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LoRaWAN failover resource-allocation simulator"};
  Options opt;
  app.add_option("--config", opt.config_path, "Scenario config file");
  app.add_option("--failure", opt.failure, "AP failure fraction in [0,1]");
  app.add_option("--lambda", opt.lambda, "Applications per server (K)");
  app.add_flag("--sweep", opt.sweep,
               "Run failure {0,0.5,1} x lambda {10..100} cross product");
  app.add_option("--seed", opt.seed, "PRNG seed");
  app.add_option("--out", opt.out_dir, "Output directory");
  app.add_option("--format", opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--strict-selection", opt.strict_selection,
               "Require both resource lifetimes in server selection");
  app.add_flag("--paper-literal-decay", opt.paper_literal_decay,
               "Raw application counts in the decay exponents");
  CLI11_PARSE(app, argc, argv);

  lorafall::ScenarioConfig cfg;
  try {
    if (!opt.config_path.empty()) cfg = lorafall::load_config_file(opt.config_path);
    if (opt.failure) cfg.failure_fraction = *opt.failure;
    if (opt.lambda) cfg.k_apps = *opt.lambda;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.strict_selection) cfg.strict_selection = true;
    if (opt.paper_literal_decay) cfg.paper_literal_decay = true;
    cfg = lorafall::validate_config(cfg);
  } catch (const lorafall::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    std::filesystem::create_directories(opt.out_dir);
    std::vector<lorafall::RunManifest> manifests;
    int exit_code = kExitOk;
    if (opt.sweep) {
      auto t0 = std::chrono::steady_clock::now();
      auto sweep = lorafall::run_sweep(cfg);
      auto wall = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      double per_run = wall / static_cast<double>(sweep.cells.size());
      std::string combined = lorafall::kCsvHeader + std::string("\n");
      for (const auto& cell : sweep.cells) {
        lorafall::ScenarioConfig c = cfg;
        c.failure_fraction = cell.failure;
        c.k_apps = cell.lambda;
        int code = emit_run(c, cell.result, opt, manifests, per_run);
        exit_code = std::max(exit_code, code);
        auto csv = lorafall::snapshots_to_csv(cell.result.snapshots, cell.failure,
                                              cell.lambda);
        combined += csv.substr(csv.find('\n') + 1);  // rows only
      }
      lorafall::write_text_file(opt.out_dir + "/sweep.csv", combined);
      lorafall::write_figure_files(sweep, opt.out_dir);
      for (const auto& agg : lorafall::aggregate_sweep(sweep)) {
        std::printf(
            "scenario failure=%.2f: p_time=%.4f p_config=%.4f restoration=%.5f "
            "energy_gain=%.2f%% rem/close=%.5fJ lifetime=%.4fs sustainability=%.3f\n",
            agg.failure, agg.p_time, agg.p_config, agg.restoration,
            agg.energy_gain_pct, agg.remaining_per_close, agg.mean_lifetime_ext_s,
            agg.sustainability);
      }
    } else {
      auto t0 = std::chrono::steady_clock::now();
      auto result = lorafall::run_scenario(cfg);
      auto wall = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
      exit_code = emit_run(cfg, result, opt, manifests, wall);
      print_summary(cfg, result.summary);
    }
    lorafall::append_manifest(opt.out_dir, manifests);
    return exit_code;
  } catch (const lorafall::InvariantViolation& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return kExitInternalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
