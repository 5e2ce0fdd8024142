#include "lorafall/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace lorafall {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

AgreementLabel label_from_string(const std::string& s) {
  if (s == "Reset") return AgreementLabel::Reset;
  if (s == "Expand") return AgreementLabel::Expand;
  return AgreementLabel::Continue;
}

}  // namespace

std::string snapshots_to_csv(std::span<const MetricsSnapshot> snaps,
                             double failure_fraction, int lambda) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& s : snaps) {
    out << fmt6(s.step_time) << ',' << fmt6(failure_fraction) << ',' << lambda
        << ',' << s.active_links << ',' << fmt6(s.p_continuity_time) << ','
        << fmt6(s.p_continuity_config) << ',' << fmt6(s.restoration) << ','
        << fmt6(s.mem_gain_mb) << ',' << fmt6(s.energy_gain_j) << ','
        << fmt6(s.energy_gain_pct) << ','
        << fmt6(s.remaining_energy_per_closing_app) << ','
        << fmt6(s.mean_lifetime_s) << ','
        << (s.survivable ? "Available" : "Unavailable") << ','
        << fmt6(s.sustainability) << ',' << fmt6(s.se_mem_value) << ','
        << to_string(s.se_mem_label) << ',' << fmt6(s.se_energy_value) << ','
        << to_string(s.se_energy_label) << ',' << (s.deadlock ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string snapshots_to_json(std::span<const MetricsSnapshot> snaps,
                              double failure_fraction, int lambda) {
  nlohmann::json root;
  root["failure_fraction"] = failure_fraction;
  root["lambda"] = lambda;
  root["snapshots"] = nlohmann::json::array();
  for (const auto& s : snaps) {
    nlohmann::json j;
    j["t_s"] = s.step_time;
    j["active_links"] = s.active_links;
    j["p_cont_time"] = s.p_continuity_time;
    j["p_cont_config"] = s.p_continuity_config;
    j["restoration"] = s.restoration;
    j["mem_gain_mb"] = s.mem_gain_mb;
    j["mem_gain_pct"] = s.mem_gain_pct;
    j["energy_gain_j"] = s.energy_gain_j;
    j["energy_gain_pct"] = s.energy_gain_pct;
    j["remaining_energy_j"] = s.remaining_energy_per_closing_app;
    j["mean_lifetime_s"] = s.mean_lifetime_s;
    j["survivability"] = s.survivable ? "Available" : "Unavailable";
    j["sustainability"] = s.sustainability;
    j["se_mem_value"] = s.se_mem_value;
    j["se_mem_label"] = to_string(s.se_mem_label);
    j["se_energy_value"] = s.se_energy_value;
    j["se_energy_label"] = to_string(s.se_energy_label);
    j["deadlock"] = s.deadlock;
    j["closures"] = s.closures;
    j["closure_remaining_sum"] = s.closure_remaining_sum;
    root["snapshots"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

std::vector<MetricsSnapshot> snapshots_from_json(const std::string& text) {
  auto root = nlohmann::json::parse(text);
  std::vector<MetricsSnapshot> out;
  for (const auto& j : root.at("snapshots")) {
    MetricsSnapshot s;
    s.step_time = j.at("t_s").get<double>();
    s.active_links = j.at("active_links").get<int>();
    s.p_continuity_time = j.at("p_cont_time").get<double>();
    s.p_continuity_config = j.at("p_cont_config").get<double>();
    s.restoration = j.at("restoration").get<double>();
    s.mem_gain_mb = j.at("mem_gain_mb").get<double>();
    s.mem_gain_pct = j.at("mem_gain_pct").get<double>();
    s.energy_gain_j = j.at("energy_gain_j").get<double>();
    s.energy_gain_pct = j.at("energy_gain_pct").get<double>();
    s.remaining_energy_per_closing_app = j.at("remaining_energy_j").get<double>();
    s.mean_lifetime_s = j.at("mean_lifetime_s").get<double>();
    s.survivable = j.at("survivability").get<std::string>() == "Available";
    s.sustainability = j.at("sustainability").get<double>();
    s.se_mem_value = j.at("se_mem_value").get<double>();
    s.se_mem_label = label_from_string(j.at("se_mem_label").get<std::string>());
    s.se_energy_value = j.at("se_energy_value").get<double>();
    s.se_energy_label = label_from_string(j.at("se_energy_label").get<std::string>());
    s.deadlock = j.at("deadlock").get<bool>();
    s.closures = j.at("closures").get<long long>();
    s.closure_remaining_sum = j.at("closure_remaining_sum").get<double>();
    out.push_back(s);
  }
  return out;
}

Sweep run_sweep(const ScenarioConfig& base, const std::vector<double>& failures,
                const std::vector<int>& lambdas) {
  Sweep sweep;
  sweep.failures = failures;
  sweep.lambdas = lambdas;
  for (double f : failures) {
    for (int lam : lambdas) {
      ScenarioConfig cfg = base;
      cfg.failure_fraction = f;
      cfg.k_apps = lam;
      SweepCell cell;
      cell.failure = f;
      cell.lambda = lam;
      cell.result = run_scenario(cfg);
      sweep.cells.push_back(std::move(cell));
    }
  }
  return sweep;
}

std::vector<ScenarioAggregates> aggregate_sweep(const Sweep& sweep) {
  std::vector<ScenarioAggregates> out;
  for (std::size_t fi = 0; fi < sweep.failures.size(); ++fi) {
    ScenarioAggregates agg;
    agg.failure = sweep.failures[fi];
    double p_time_weighted = 0.0, rem_sum = 0.0;
    long long closures = 0;
    double pc = 0.0, resto = 0.0, ge = 0.0, gm = 0.0, sus = 0.0, life = 0.0;
    for (std::size_t li = 0; li < sweep.lambdas.size(); ++li) {
      const RunSummary& s = sweep.at(fi, li).summary;
      p_time_weighted += s.avg_p_time * static_cast<double>(s.closures);
      closures += s.closures;
      rem_sum += s.closure_remaining_sum;
      pc += s.avg_p_config;
      resto += s.restoration_final;
      ge += s.avg_energy_gain_pct;
      gm += s.avg_mem_gain_pct;
      sus += s.sustainability;
      life += s.mean_lifetime_ext_s;
      agg.final_links.push_back(s.final_active_links);
      agg.energy_gain_per_lambda.push_back(s.avg_energy_gain_pct);
      agg.any_deadlock = agg.any_deadlock || s.any_deadlock;
    }
    auto n = static_cast<double>(sweep.lambdas.size());
    agg.p_time = closures > 0 ? p_time_weighted / static_cast<double>(closures) : 1.0;
    agg.p_config = pc / n;
    agg.restoration = resto / n;
    agg.energy_gain_pct = ge / n;
    agg.mem_gain_pct = gm / n;
    agg.remaining_per_close =
        closures > 0 ? rem_sum / static_cast<double>(closures) : 0.0;
    agg.sustainability = sus / n;
    agg.mean_lifetime_ext_s = life / n;
    out.push_back(std::move(agg));
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("unwritable output path: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

namespace {

std::string scenario_label(double f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fail%03d", static_cast<int>(f * 100 + 0.5));
  return buf;
}

void write_figure(const std::string& out_dir, const std::string& name,
                  const Sweep& sweep,
                  const std::function<double(const RunSummary&)>& pick) {
  std::ostringstream csv;
  csv << "lambda";
  for (double f : sweep.failures) csv << ',' << scenario_label(f);
  csv << '\n';
  for (std::size_t li = 0; li < sweep.lambdas.size(); ++li) {
    csv << sweep.lambdas[li];
    for (std::size_t fi = 0; fi < sweep.failures.size(); ++fi)
      csv << ',' << fmt6(pick(sweep.at(fi, li).summary));
    csv << '\n';
  }
  write_text_file(out_dir + "/" + name, csv.str());
}

}  // namespace

void write_figure_files(const Sweep& sweep, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_figure(out_dir, "fig5.csv", sweep, [](const RunSummary& s) {
    return static_cast<double>(s.final_active_links);
  });
  write_figure(out_dir, "fig6.csv", sweep,
               [](const RunSummary& s) { return s.avg_p_time; });
  write_figure(out_dir, "fig7.csv", sweep,
               [](const RunSummary& s) { return s.avg_p_config; });
  write_figure(out_dir, "fig8.csv", sweep,
               [](const RunSummary& s) { return s.restoration_final; });
  write_figure(out_dir, "fig9.csv", sweep,
               [](const RunSummary& s) { return s.avg_energy_gain_pct; });
  write_figure(out_dir, "fig10.csv", sweep,
               [](const RunSummary& s) { return s.remaining_per_closing_avg; });
  write_figure(out_dir, "fig11.csv", sweep,
               [](const RunSummary& s) { return s.sustainability; });
}

void append_manifest(const std::string& out_dir,
                     const std::vector<RunManifest>& entries) {
  std::filesystem::create_directories(out_dir);
  std::string path = out_dir + "/manifest.json";
  nlohmann::json root = nlohmann::json::array();
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    if (in) {
      try {
        root = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error&) {
        root = nlohmann::json::array();
      }
    }
  }
  for (const auto& m : entries) {
    nlohmann::json j;
    j["failure_fraction"] = m.failure;
    j["lambda"] = m.lambda;
    j["seed"] = m.seed;
    j["artifact_version"] = m.artifact_version;
    j["files"] = m.files;
    j["wall_ms"] = m.wall_ms;
    root.push_back(std::move(j));
  }
  write_text_file(path, root.dump(2) + "\n");
}

}  // namespace lorafall
