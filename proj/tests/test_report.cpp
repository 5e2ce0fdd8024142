#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lorafall/report.hpp"

using namespace lorafall;

namespace {

ScenarioConfig desk(int k, double f) {
  ScenarioConfig c;
  c.k_apps = k;
  c.failure_fraction = f;
  return c;
}

int count_columns(const std::string& line) {
  int n = 1;
  for (char ch : line)
    if (ch == ',') ++n;
  return n;
}

}  // namespace

TEST_CASE("empty snapshot list emits a header-only file") {
  auto csv = snapshots_to_csv({}, 0.0, 100);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == kCsvHeader);
  std::string rest;
  CHECK_FALSE(std::getline(in, rest));
}

TEST_CASE("one snapshot emits one 19-column row") {
  auto r = run_scenario(desk(10, 0.0));
  auto csv = snapshots_to_csv({r.snapshots.data(), 1}, 0.0, 10);
  std::istringstream in(csv);
  std::string header, row;
  std::getline(in, header);
  REQUIRE(std::getline(in, row));
  CHECK(count_columns(header) == 19);
  CHECK(count_columns(row) == 19);
}

TEST_CASE("identical runs emit byte-identical reports") {
  auto a = run_scenario(desk(100, 0.5));
  auto b = run_scenario(desk(100, 0.5));
  CHECK(snapshots_to_csv(a.snapshots, 0.5, 100) ==
        snapshots_to_csv(b.snapshots, 0.5, 100));
  CHECK(snapshots_to_json(a.snapshots, 0.5, 100) ==
        snapshots_to_json(b.snapshots, 0.5, 100));
}

TEST_CASE("json reports round-trip exactly") {
  auto r = run_scenario(desk(60, 1.0));
  auto text = snapshots_to_json(r.snapshots, 1.0, 60);
  auto back = snapshots_from_json(text);
  REQUIRE(back.size() == r.snapshots.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& x = r.snapshots[i];
    const auto& y = back[i];
    CHECK(x.step_time == y.step_time);
    CHECK(x.active_links == y.active_links);
    CHECK(x.p_continuity_time == y.p_continuity_time);
    CHECK(x.p_continuity_config == y.p_continuity_config);
    CHECK(x.restoration == y.restoration);
    CHECK(x.mem_gain_mb == y.mem_gain_mb);
    CHECK(x.energy_gain_j == y.energy_gain_j);
    CHECK(x.energy_gain_pct == y.energy_gain_pct);
    CHECK(x.remaining_energy_per_closing_app == y.remaining_energy_per_closing_app);
    CHECK(x.mean_lifetime_s == y.mean_lifetime_s);
    CHECK(x.survivable == y.survivable);
    CHECK(x.sustainability == y.sustainability);
    CHECK(x.se_mem_value == y.se_mem_value);
    CHECK(x.se_mem_label == y.se_mem_label);
    CHECK(x.se_energy_value == y.se_energy_value);
    CHECK(x.se_energy_label == y.se_energy_label);
    CHECK(x.deadlock == y.deadlock);
  }
}

TEST_CASE("manifest entries append across invocations") {
  auto dir = std::filesystem::temp_directory_path() / "lorafall_manifest_test";
  std::filesystem::remove_all(dir);
  RunManifest m;
  m.artifact_version = kArtifactVersion;
  m.files = {"a.csv"};
  append_manifest(dir.string(), {m, m});
  append_manifest(dir.string(), {m});
  std::ifstream in(dir / "manifest.json");
  std::stringstream ss;
  ss << in.rdbuf();
  auto parsed = nlohmann::json::parse(ss.str());
  CHECK(parsed.size() == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("figure files cover fig5 through fig11") {
  ScenarioConfig base;
  auto sweep = run_sweep(base, {0.0}, {10, 20});
  auto dir = std::filesystem::temp_directory_path() / "lorafall_fig_test";
  std::filesystem::remove_all(dir);
  write_figure_files(sweep, dir.string());
  for (int f = 5; f <= 11; ++f) {
    CHECK(std::filesystem::exists(dir / ("fig" + std::to_string(f) + ".csv")));
  }
  std::filesystem::remove_all(dir);
}
