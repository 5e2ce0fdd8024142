#ifndef LORAFALL_CONFIG_HPP_
#define LORAFALL_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorafall {

enum class ArrivalModel { Deterministic, Poisson };
enum class AllocationPrecedence { MemoryFirst, EnergyFirst };

// Every tunable of a scenario. Field names double as the config-file keys.
struct ScenarioConfig {
  int n_core = 1;
  int n_servers = 10;
  int n_gateways = 100;
  int n_aps = 100;
  int n_users = 1000;
  double failure_fraction = 0.0;
  double session_time = 3600.0;  // s
  double t_max = 7200.0;         // s
  double time_step = 360.0;      // s
  int k_apps = 100;              // applications per server (and PSC pool size)
  ArrivalModel arrival_model = ArrivalModel::Deterministic;
  int mem_per_app_min = 1;   // MB
  int mem_per_app_max = 10;  // MB
  int mem_initial = 10000;   // MB per server
  double energy_per_app = 0.0337;   // J, per application slot
  double power_draw = 33.724e-6;    // J/s per application
  double close_fraction = 0.10;     // share of active apps closing per step
  double n1 = 0.5;
  double n2 = 0.3;
  double decay_constant_energy = 0.0;  // 1/s; 0 -> ln2 / session_time
  double decay_constant_memory = 0.0;  // 1/s; 0 -> ln2 / session_time
  int delta_x_energy = 1;
  int delta_y_memory = 1;
  int slots_per_server = 100;
  std::uint64_t seed = 42;
  double strictness_factor = 0.5;  // quantifies the "much less than" check
  AllocationPrecedence precedence = AllocationPrecedence::MemoryFirst;
  bool strict_selection = false;     // both resource lifetimes must pass
  bool paper_literal_decay = false;  // raw application counts in exponents
  double decay_exponent_scale = 0.0;  // 0 -> normalize baseline exponent to -1

  int session_steps() const {
    return static_cast<int>(session_time / time_step + 0.5);
  }
  int horizon_steps() const {
    return static_cast<int>(t_max / time_step + 0.5);
  }
  double kappa_energy() const;
  double kappa_memory() const;
  int total_links() const {
    return 1 + n_servers + n_gateways + n_aps + n_users;
  }
};

struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ConfigError(std::vector<std::string> names);
};

// Names of every violated invariant; empty means the config is valid.
std::vector<std::string> config_violations(const ScenarioConfig& c);

// Returns the config unchanged or throws ConfigError listing all violations.
ScenarioConfig validate_config(const ScenarioConfig& raw);

// Flat key/value file ("key = value" or "key value" per line, '#' comments).
// Unknown keys are a hard error so symbol typos cannot pass silently.
ScenarioConfig load_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

std::string to_string(ArrivalModel m);
std::string to_string(AllocationPrecedence p);

}  // namespace lorafall

#endif  // LORAFALL_CONFIG_HPP_
