#include "lorafall/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lorafall {

double ScenarioConfig::kappa_energy() const {
  return decay_constant_energy > 0.0 ? decay_constant_energy
                                     : std::log(2.0) / session_time;
}

double ScenarioConfig::kappa_memory() const {
  return decay_constant_memory > 0.0 ? decay_constant_memory
                                     : std::log(2.0) / session_time;
}

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out = "invalid config:";
  for (const auto& n : names) out += " " + n;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> names)
    : std::runtime_error(join(names)), violations(std::move(names)) {}

std::vector<std::string> config_violations(const ScenarioConfig& c) {
  std::vector<std::string> v;
  if (c.n_core < 1) v.push_back("n_core_below_one");
  if (c.n_servers < 1) v.push_back("n_servers_below_one");
  if (c.n_gateways < 1) v.push_back("n_gateways_below_one");
  if (c.n_aps < 1) v.push_back("n_aps_below_one");
  if (c.n_users < 1) v.push_back("n_users_below_one");
  if (c.failure_fraction < 0.0 || c.failure_fraction > 1.0)
    v.push_back("failure_fraction_out_of_range");
  if (c.session_time <= 0.0) v.push_back("session_time_nonpositive");
  if (c.time_step <= 0.0) {
    v.push_back("time_step_nonpositive");
  } else {
    double steps = c.session_time / c.time_step;
    if (std::abs(steps - std::round(steps)) > 1e-9)
      v.push_back("time_step_not_divisor_of_session");
  }
  if (c.t_max < c.session_time) v.push_back("t_max_below_session_time");
  if (c.k_apps < 0) v.push_back("k_apps_negative");
  if (c.mem_per_app_min < 1 || c.mem_per_app_max < c.mem_per_app_min)
    v.push_back("mem_per_app_range_invalid");
  if (c.mem_initial < c.mem_per_app_max) v.push_back("mem_initial_below_app_max");
  if (c.energy_per_app <= 0.0) v.push_back("energy_per_app_nonpositive");
  if (c.power_draw <= 0.0) v.push_back("power_draw_nonpositive");
  if (c.close_fraction < 0.0 || c.close_fraction > 1.0)
    v.push_back("close_fraction_out_of_range");
  if (c.n1 + c.n2 <= 0.0) v.push_back("n1_n2_sum_nonpositive");
  if (c.n1 + c.n2 > 1.0 + 1e-12) v.push_back("n1_n2_sum_exceeds_one");
  if (c.n1 < 0.0 || c.n2 < 0.0) v.push_back("n1_n2_negative");
  if (c.decay_constant_energy < 0.0) v.push_back("decay_constant_energy_negative");
  if (c.decay_constant_memory < 0.0) v.push_back("decay_constant_memory_negative");
  if (c.delta_x_energy < 1) v.push_back("delta_x_below_one");
  if (c.delta_y_memory < 1) v.push_back("delta_y_below_one");
  if (c.slots_per_server < 1) v.push_back("slots_per_server_below_one");
  if (c.strictness_factor <= 0.0 || c.strictness_factor > 1.0)
    v.push_back("strictness_factor_out_of_range");
  if (c.decay_exponent_scale < 0.0) v.push_back("decay_exponent_scale_negative");
  return v;
}

ScenarioConfig validate_config(const ScenarioConfig& raw) {
  auto v = config_violations(raw);
  if (!v.empty()) throw ConfigError(std::move(v));
  return raw;
}

std::string to_string(ArrivalModel m) {
  return m == ArrivalModel::Deterministic ? "deterministic" : "poisson";
}

std::string to_string(AllocationPrecedence p) {
  return p == AllocationPrecedence::MemoryFirst ? "memory" : "energy";
}

namespace {

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError({"bad_bool_value:" + s});
}

void apply_key(ScenarioConfig& c, const std::string& key, const std::string& val) {
  auto as_int = [&] { return std::stoi(val); };
  auto as_f = [&] { return std::stod(val); };
  if (key == "n_core") c.n_core = as_int();
  else if (key == "n_servers") c.n_servers = as_int();
  else if (key == "n_gateways") c.n_gateways = as_int();
  else if (key == "n_aps") c.n_aps = as_int();
  else if (key == "n_users") c.n_users = as_int();
  else if (key == "failure_fraction") c.failure_fraction = as_f();
  else if (key == "session_time") c.session_time = as_f();
  else if (key == "t_max") c.t_max = as_f();
  else if (key == "time_step") c.time_step = as_f();
  else if (key == "k_apps") c.k_apps = as_int();
  else if (key == "arrival_model") {
    if (val == "deterministic") c.arrival_model = ArrivalModel::Deterministic;
    else if (val == "poisson") c.arrival_model = ArrivalModel::Poisson;
    else throw ConfigError({"unknown_arrival_model:" + val});
  } else if (key == "mem_per_app_range") {
    auto dash = val.find('-');
    if (dash == std::string::npos) throw ConfigError({"mem_per_app_range_format"});
    c.mem_per_app_min = std::stoi(val.substr(0, dash));
    c.mem_per_app_max = std::stoi(val.substr(dash + 1));
  } else if (key == "mem_initial") c.mem_initial = as_int();
  else if (key == "energy_per_app") c.energy_per_app = as_f();
  else if (key == "power_draw") c.power_draw = as_f();
  else if (key == "close_fraction") c.close_fraction = as_f();
  else if (key == "n1") c.n1 = as_f();
  else if (key == "n2") c.n2 = as_f();
  else if (key == "decay_constant_energy") c.decay_constant_energy = as_f();
  else if (key == "decay_constant_memory") c.decay_constant_memory = as_f();
  else if (key == "delta_x_energy") c.delta_x_energy = as_int();
  else if (key == "delta_y_memory") c.delta_y_memory = as_int();
  else if (key == "slots_per_server") c.slots_per_server = as_int();
  else if (key == "seed") c.seed = std::stoull(val);
  else if (key == "strictness_factor") c.strictness_factor = as_f();
  else if (key == "precedence") {
    if (val == "memory") c.precedence = AllocationPrecedence::MemoryFirst;
    else if (val == "energy") c.precedence = AllocationPrecedence::EnergyFirst;
    else throw ConfigError({"unknown_precedence:" + val});
  } else if (key == "strict_selection") c.strict_selection = parse_bool(val);
  else if (key == "paper_literal_decay") c.paper_literal_decay = parse_bool(val);
  else if (key == "decay_exponent_scale") c.decay_exponent_scale = as_f();
  else throw ConfigError({"unknown_key:" + key});
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string val;
    ls >> val;
    if (val == "=") ls >> val;
    if (val.empty()) throw ConfigError({"missing_value_for:" + key});
    apply_key(c, key, val);
  }
  return validate_config(c);
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({"config_file_unreadable:" + path});
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace lorafall
