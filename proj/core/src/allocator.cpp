#include "lorafall/allocator.hpp"

#include <algorithm>
#include <cmath>

namespace lorafall {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lifetime_seconds(const DecayInfo& d) {
  if (d.exhausted) return 0.0;
  if (d.lambda_per_s <= 0.0) return kInf;
  return std::ceil(1.0 / d.lambda_per_s);
}

// Bounded enumeration budget for the repack path.
bool repack_search_feasible(std::size_t pool, std::size_t servers) {
  if (pool == 0 || servers == 0 || pool > 8) return false;
  double combos = std::pow(static_cast<double>(servers), static_cast<double>(pool));
  return combos <= 131072.0;
}

}  // namespace

DecayInfo decay_rate(const ServerState& server, ResourceBasis basis,
                     double step_seconds) {
  double drain, remaining, d0;
  if (basis == ResourceBasis::Memory) {
    drain = static_cast<double>(std::max(0, server.mem_drain_last_mb));
    remaining = static_cast<double>(server.free_mem_mb());
    d0 = static_cast<double>(server.mem_capacity_mb);
  } else {
    drain = std::max(0.0, server.energy_drain_last);
    remaining = server.initial_energy - server.energy_consumed_total;
    d0 = server.initial_energy;
  }
  DecayInfo out;
  if (remaining <= 0.0) {
    out.lambda_per_s = kInf;
    out.level = 0.0;
    out.exhausted = true;
    return out;
  }
  out.lambda_per_s = drain / remaining / step_seconds;
  out.level = d0 * std::exp(-out.lambda_per_s * step_seconds);
  return out;
}

std::vector<ServerId> select_available_servers(std::span<const ServerState> servers,
                                               double min_required_time_s,
                                               SelectionMode mode,
                                               double step_seconds) {
  struct Entry {
    ServerId id;
    double lambda;
    bool available;
  };
  std::vector<Entry> entries;
  entries.reserve(servers.size());
  double min_level = kInf;
  std::vector<DecayInfo> mem(servers.size()), en(servers.size());
  for (std::size_t i = 0; i < servers.size(); ++i) {
    mem[i] = decay_rate(servers[i], ResourceBasis::Memory, step_seconds);
    en[i] = decay_rate(servers[i], ResourceBasis::Energy, step_seconds);
    if (!mem[i].exhausted && !en[i].exhausted)
      min_level = std::min(min_level, en[i].level);
  }
  for (std::size_t i = 0; i < servers.size(); ++i) {
    const bool exhausted = mem[i].exhausted || en[i].exhausted;
    bool ok = false;
    if (!exhausted) {
      if (mode == SelectionMode::Strict) {
        ok = lifetime_seconds(mem[i]) >= min_required_time_s &&
             lifetime_seconds(en[i]) >= min_required_time_s;
      } else {
        ok = lifetime_seconds(mem[i]) >= min_required_time_s ||
             lifetime_seconds(en[i]) >= min_required_time_s ||
             en[i].level == min_level;
      }
    }
    // Combined drain orders the hosting game; the healthiest server hosts.
    double lam = exhausted ? kInf : mem[i].lambda_per_s + en[i].lambda_per_s;
    entries.push_back({servers[i].id, lam, ok});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.id < b.id;
  });
  std::vector<ServerId> out;
  for (const auto& e : entries)
    if (e.available) out.push_back(e.id);
  return out;
}

EquilibriumThresholds compute_thresholds(std::span<const ServerRestorationRaw> lora_only,
                                         double e0, double alpha0_mb,
                                         int delta_x, int delta_y) {
  EquilibriumThresholds th;
  th.delta_x = delta_x;
  th.delta_y = delta_y;
  if (lora_only.empty()) return th;
  double min_e = kInf, min_m = kInf;
  for (const auto& r : lora_only) {
    min_e = std::min(min_e, r.raw_e);
    min_m = std::min(min_m, r.raw_m);
  }
  th.e_th_j = std::max(0.0, min_e * e0);
  th.alpha_th_mb = std::max(0.0, min_m * alpha0_mb);
  return th;
}

bool equilibrium_holds(std::span<const ServerState> servers,
                       std::span<const ServerRestorationRaw> current,
                       std::span<const ServerId> bprime,
                       const EquilibriumThresholds& thresholds,
                       const ScenarioConfig& config) {
  const double e0 = config.energy_per_app;
  const double alpha0 = static_cast<double>(config.mem_initial);
  for (ServerId s : bprime) {
    const auto& r = current[static_cast<std::size_t>(s)];
    double level_e = std::max(0.0, r.raw_e * e0);
    double level_m = std::max(0.0, r.raw_m * alpha0);
    if (level_e < thresholds.e_th_j - 1e-12) return false;
    if (level_m < thresholds.alpha_th_mb - 1e-12) return false;
  }
  double e0_bprime = 0.0, a0_bprime = 0.0;
  for (ServerId s : bprime) {
    e0_bprime += servers[static_cast<std::size_t>(s)].initial_energy;
    a0_bprime += servers[static_cast<std::size_t>(s)].mem_capacity_mb;
  }
  double e0_b = 0.0, a0_b = 0.0;
  for (const auto& s : servers) {
    e0_b += s.initial_energy;
    a0_b += s.mem_capacity_mb;
  }
  // Pre-disaster application counts: K per server on B'; the network total
  // additionally counts every server once more.
  double k_bprime = static_cast<double>(config.k_apps) * bprime.size();
  double k_b = k_bprime + static_cast<double>(config.k_apps) * servers.size();
  double scale;
  if (config.paper_literal_decay) {
    scale = 1.0;
  } else if (config.decay_exponent_scale > 0.0) {
    scale = config.decay_exponent_scale;
  } else {
    scale = k_b > 0.0 ? 1.0 / (k_b * config.t_max) : 0.0;
  }
  double lhs_e = e0_bprime * std::exp(-k_bprime * scale * config.t_max);
  double rhs_e = e0_b * std::exp(-k_b * scale * config.t_max) / thresholds.delta_x;
  if (lhs_e < rhs_e - 1e-12) return false;
  double lhs_a = a0_bprime * std::exp(-k_bprime * scale * config.t_max);
  double rhs_a = a0_b * std::exp(-k_b * scale * config.t_max) / thresholds.delta_y;
  return lhs_a >= rhs_a - 1e-12;
}

AllocationResult allocate(std::span<Application*> pool,
                          std::span<ServerState> servers,
                          std::span<const ServerRestorationRaw> restoration,
                          EquilibriumThresholds thresholds,
                          const ScenarioConfig& config) {
  AllocationResult res;
  res.final_thresholds = thresholds;
  if (pool.empty()) {
    res.equilibrium_satisfied = true;
    return res;
  }
  for (std::size_t i = 1; i < pool.size(); ++i) {
    const Application* a = pool[i - 1];
    const Application* b = pool[i];
    if (a->arrival_time > b->arrival_time ||
        (a->arrival_time == b->arrival_time && a->id > b->id))
      throw InvariantViolation("allocation pool is not FCFS ordered");
  }

  auto reject_app = [&res](Application* a, const char* reason) {
    if (a->phase == AppPhase::Pending) a->reject();
    res.rejected.emplace_back(a->id, reason);
  };

  SelectionMode mode =
      config.strict_selection ? SelectionMode::Strict : SelectionMode::Relaxed;
  auto bprime = select_available_servers(servers, config.time_step, mode,
                                         config.time_step);
  if (bprime.empty() && mode == SelectionMode::Strict)
    bprime = select_available_servers(servers, config.time_step,
                                      SelectionMode::Relaxed, config.time_step);
  if (bprime.empty()) {
    for (Application* a : pool) reject_app(a, "no_available_server");
    res.deadlock = true;
    res.iterations = 1;
    return res;
  }

  // The equilibrium conditions do not depend on this pass's placements, so
  // threshold relaxation can run up front; a pool that cannot reach
  // equilibrium is the bottleneck loop the thresholds are meant to break.
  res.iterations = 1;
  bool eq = equilibrium_holds(servers, restoration, bprime, thresholds, config);
  while (!eq && res.threshold_adjustments < kMaxThresholdAdjustments) {
    thresholds.e_th_j *= kThresholdRelaxation;
    thresholds.alpha_th_mb *= kThresholdRelaxation;
    ++res.threshold_adjustments;
    ++res.iterations;
    eq = equilibrium_holds(servers, restoration, bprime, thresholds, config);
  }
  res.final_thresholds = thresholds;
  res.equilibrium_satisfied = eq;
  if (!eq) {
    for (Application* a : pool) reject_app(a, "equilibrium_unattainable");
    res.deadlock = true;
    return res;
  }

  long long network_available_mb = 0;
  for (const auto& s : servers) network_available_mb += s.free_mem_mb();

  // Entry state for the small-pool repack path.
  std::vector<ServerState> entry_servers(servers.begin(), servers.end());
  struct AppEntry {
    AppPhase phase;
    ServerId host;
  };
  std::vector<AppEntry> entry_apps;
  entry_apps.reserve(pool.size());
  for (const Application* a : pool) entry_apps.push_back({a->phase, a->host});

  const bool energy_first = config.precedence == AllocationPrecedence::EnergyFirst;
  std::vector<Application*> left;
  for (Application* app : pool) {
    bool placed = false;
    for (ServerId sid : bprime) {
      ServerState& s = servers[static_cast<std::size_t>(sid)];
      bool mem_ok = memory_feasible(std::span<const int>(&app->mem_demand_mb, 1),
                                    s.free_mem_mb(), network_available_mb);
      bool slot_ok = s.free_slots() > 0;
      // The unclaimed slot provisions are the energy gain the server can
      // commit to a newcomer.
      double delta_e = static_cast<double>(s.free_slots()) * config.energy_per_app;
      double need = app->remaining_energy();
      bool energy_ok =
          energy_requirement_ok(std::span<const double>(&need, 1), delta_e, false);
      bool fits = energy_first ? (energy_ok && slot_ok && mem_ok)
                               : (mem_ok && slot_ok && energy_ok);
      if (fits) {
        s.admit(*app);
        s.mem_drain_last_mb += app->mem_demand_mb;
        network_available_mb -= app->mem_demand_mb;
        res.placements.emplace_back(app->id, sid);
        placed = true;
        break;
      }
    }
    if (!placed) left.push_back(app);
  }

  // Overflow goes to the server with the longest lifetime on the precedence
  // basis, regardless of the availability cut.
  std::vector<Application*> unplaced;
  for (Application* app : left) {
    ServerId best = -1;
    double best_life = -1.0;
    for (const auto& s : servers) {
      if (!s.fits(*app)) continue;
      auto d = decay_rate(s, energy_first ? ResourceBasis::Energy
                                          : ResourceBasis::Memory,
                          config.time_step);
      double life = d.exhausted ? -1.0
                                : (d.lambda_per_s <= 0.0
                                       ? std::numeric_limits<double>::max()
                                       : std::ceil(1.0 / d.lambda_per_s));
      if (life > best_life || (life == best_life && best >= 0 && s.id < best)) {
        best_life = life;
        best = s.id;
      }
    }
    if (best >= 0) {
      ServerState& s = servers[static_cast<std::size_t>(best)];
      s.admit(*app);
      s.mem_drain_last_mb += app->mem_demand_mb;
      res.placements.emplace_back(app->id, best);
    } else {
      unplaced.push_back(app);
    }
  }

  // First-fit can strand a packable pool when sizes interlock. For pools
  // small enough to enumerate, retry every assignment (FCFS application
  // order, servers per app) before giving up.
  if (!unplaced.empty() && repack_search_feasible(pool.size(), servers.size())) {
    std::vector<std::size_t> choice(pool.size(), 0);
    bool found = false;
    while (true) {
      std::vector<ServerState> scratch(entry_servers.begin(), entry_servers.end());
      bool ok = true;
      for (std::size_t i = 0; i < pool.size() && ok; ++i) {
        ServerState& s = scratch[choice[i]];
        double delta_e =
            static_cast<double>(s.free_slots()) * config.energy_per_app;
        double need = pool[i]->energy_budget - pool[i]->consumed;
        if (!s.fits(*pool[i]) || need > delta_e) {
          ok = false;
        } else {
          s.mem_used_mb += pool[i]->mem_demand_mb;
          s.slots_used += 1;
        }
      }
      if (ok) {
        found = true;
        break;
      }
      std::size_t i = 0;
      while (i < choice.size() && ++choice[i] == servers.size()) choice[i++] = 0;
      if (i == choice.size()) break;
    }
    if (found) {
      for (std::size_t i = 0; i < servers.size(); ++i)
        servers[i] = entry_servers[i];
      for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i]->phase = entry_apps[i].phase;
        pool[i]->host = entry_apps[i].host;
      }
      res.placements.clear();
      for (std::size_t i = 0; i < pool.size(); ++i) {
        ServerState& s = servers[choice[i]];
        s.admit(*pool[i]);
        s.mem_drain_last_mb += pool[i]->mem_demand_mb;
        res.placements.emplace_back(pool[i]->id, s.id);
      }
      return res;
    }
  }

  for (Application* app : unplaced) {
    reject_app(app, "no_server_capacity");
    res.deadlock = true;
  }
  return res;
}

ObjectiveReport objective_report(double restoration, double mean_lifetime_ext_s,
                                 bool survivable,
                                 std::span<const ServerRestorationRaw> raws,
                                 double memory_reverse_value,
                                 double energy_reverse_value) {
  ObjectiveReport r;
  r.restoration = restoration;
  r.mean_lifetime_ext_s = mean_lifetime_ext_s;
  r.survivable = survivable;
  r.e_restoration_nonneg = true;
  r.a_restoration_nonneg = true;
  for (const auto& raw : raws) {
    if (raw.raw_e < 0.0) r.e_restoration_nonneg = false;
    if (raw.raw_m < 0.0) r.a_restoration_nonneg = false;
  }
  r.memory_reverse_value = memory_reverse_value;
  r.energy_reverse_value = energy_reverse_value;
  r.constraints_satisfied = r.e_restoration_nonneg && r.a_restoration_nonneg &&
                            survivable && memory_reverse_value >= -kTieTolerance &&
                            energy_reverse_value >= -kTieTolerance;
  return r;
}

}  // namespace lorafall
