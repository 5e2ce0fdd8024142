#include "lorafall/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace lorafall {

namespace {

std::vector<int> spread_schedule(int total, int steps) {
  std::vector<int> out(static_cast<std::size_t>(steps), 0);
  if (steps <= 0) return out;
  int base = total / steps;
  int extra = total % steps;
  for (int i = 0; i < steps; ++i)
    out[static_cast<std::size_t>(i)] = base + (i < extra ? 1 : 0);
  return out;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x00000100000001b3ull;
  }
  return h;
}

std::uint64_t hash_double(std::uint64_t h, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  return fnv1a(h, &bits, sizeof(bits));
}

}  // namespace

std::uint64_t hash_snapshots(std::span<const MetricsSnapshot> snaps) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& s : snaps) {
    h = hash_double(h, s.step_time);
    h = fnv1a(h, &s.active_links, sizeof(s.active_links));
    h = hash_double(h, s.p_continuity_time);
    h = hash_double(h, s.p_continuity_config);
    h = hash_double(h, s.restoration);
    h = hash_double(h, s.mem_gain_mb);
    h = hash_double(h, s.mem_gain_pct);
    h = hash_double(h, s.energy_gain_j);
    h = hash_double(h, s.energy_gain_pct);
    h = hash_double(h, s.remaining_energy_per_closing_app);
    h = hash_double(h, s.mean_lifetime_s);
    h = hash_double(h, s.sustainability);
    h = hash_double(h, s.se_mem_value);
    h = hash_double(h, s.se_energy_value);
    int flags = (s.survivable ? 1 : 0) | (s.deadlock ? 2 : 0) |
                (static_cast<int>(s.se_mem_label) << 2) |
                (static_cast<int>(s.se_energy_label) << 4);
    h = fnv1a(h, &flags, sizeof(flags));
  }
  return h;
}

int ap_assignment_stride(int n_aps) {
  if (n_aps <= 2) return 1;
  int s = std::max(1, static_cast<int>(0.37 * n_aps));
  while (std::gcd(s, n_aps) != 1) ++s;
  return s;
}

Simulation::Simulation(const ScenarioConfig& config)
    : cfg_(validate_config(config)),
      topo_(build_topology(cfg_)),
      rng_(cfg_.seed) {
  servers_.resize(static_cast<std::size_t>(cfg_.n_servers));
  for (int s = 0; s < cfg_.n_servers; ++s) {
    auto& sv = servers_[static_cast<std::size_t>(s)];
    sv.id = s;
    sv.mem_capacity_mb = cfg_.mem_initial;
    sv.slots = cfg_.slots_per_server;
    sv.energy_provision = cfg_.k_apps * cfg_.energy_per_app;
    sv.initial_energy = cfg_.slots_per_server * cfg_.energy_per_app;
  }
  lora_arrivals_per_server_.assign(static_cast<std::size_t>(cfg_.n_servers), 0);
  native_alloc_mb_.assign(static_cast<std::size_t>(cfg_.n_servers), 0);
  last_closed_consumption_.assign(static_cast<std::size_t>(cfg_.n_servers), 0.0);
  last_closed_mem_.assign(static_cast<std::size_t>(cfg_.n_servers), 0);
  lora_sched_ = spread_schedule(cfg_.k_apps, cfg_.session_steps());
  psc_sched_ = spread_schedule(cfg_.k_apps, cfg_.session_steps());
  // Ambient streams: every alive AP relays cellular traffic, every gateway
  // carries its own LoRaWAN application data toward the core.
  for (int a = 0; a < cfg_.n_aps; ++a) {
    infra_routes_.push_back({topo_.ap_link(a)});
    infra_ap_.push_back(a);
  }
  for (int g = 0; g < cfg_.n_gateways; ++g) {
    infra_routes_.push_back({topo_.gateway_link(g),
                             topo_.server_link(topo_.server_of_gateway(g)),
                             topo_.core_app_link()});
    infra_ap_.push_back(-1);
  }
}

int Simulation::draw_alpha() {
  auto span = static_cast<std::uint64_t>(cfg_.mem_per_app_max - cfg_.mem_per_app_min + 1);
  return cfg_.mem_per_app_min + static_cast<int>(rng_() % span);
}

int Simulation::poisson_count(double mean) {
  double limit = std::exp(-mean);
  double p = 1.0;
  int k = 0;
  do {
    ++k;
    p *= (static_cast<double>(rng_() >> 11)) * 0x1p-53;
  } while (p > limit);
  return k - 1;
}

AppId Simulation::new_app(TrafficSource source, double budget, double arrival) {
  Application app;
  app.id = static_cast<AppId>(apps_.size());
  app.source = source;
  app.mem_demand_mb = draw_alpha();
  app.power_draw = cfg_.power_draw;
  app.energy_budget = budget;
  app.arrival_time = arrival;
  apps_.push_back(app);
  routes_.emplace_back();
  psc_ap_.push_back(-1);
  psc_user_.push_back(-1);
  return app.id;
}

int Simulation::gateway_for_server(ServerId s, long long arrival_index) const {
  // Gateways of server s are g = s, s+B, s+2B, ... under the round-robin layout.
  int per_server = cfg_.n_gateways / cfg_.n_servers;
  if (per_server <= 0) return s % cfg_.n_gateways;
  int j = static_cast<int>(arrival_index % per_server);
  return s + j * cfg_.n_servers;
}

void Simulation::arrive_lora(int step_index) {
  double arrival = clock_;
  for (int s = 0; s < cfg_.n_servers; ++s) {
    int n = lora_sched_[static_cast<std::size_t>(step_index - 1)];
    if (cfg_.arrival_model == ArrivalModel::Poisson)
      n = poisson_count(static_cast<double>(cfg_.k_apps) / cfg_.session_steps());
    for (int i = 0; i < n; ++i) {
      AppId id = new_app(TrafficSource::Lora, cfg_.energy_per_app, arrival);
      Application& app = apps_[static_cast<std::size_t>(id)];
      ServerState& sv = servers_[static_cast<std::size_t>(s)];
      if (!sv.fits(app)) {
        app.reject();
        continue;
      }
      sv.admit(app);
      sv.mem_drain_last_mb += app.mem_demand_mb;
      native_alloc_mb_[static_cast<std::size_t>(s)] += app.mem_demand_mb;
      int gw = gateway_for_server(s, lora_arrivals_per_server_[static_cast<std::size_t>(s)]++);
      routes_[static_cast<std::size_t>(id)] = {topo_.gateway_link(gw),
                                               topo_.server_link(s),
                                               topo_.core_app_link()};
    }
  }
}

void Simulation::arrive_psc(int step_index) {
  double arrival = clock_;
  int remaining_steps = cfg_.session_steps() - step_index + 1;
  double budget = remaining_steps * cfg_.power_draw * cfg_.time_step;
  int stride = ap_assignment_stride(cfg_.n_aps);
  int n = psc_sched_[static_cast<std::size_t>(step_index - 1)];
  for (int i = 0; i < n; ++i) {
    AppId id = new_app(TrafficSource::Psc, budget, arrival);
    int ap = static_cast<int>((psc_index_ * stride) % cfg_.n_aps);
    int user = static_cast<int>(psc_index_ % cfg_.n_users);
    ++psc_index_;
    psc_ap_[static_cast<std::size_t>(id)] = ap;
    psc_user_[static_cast<std::size_t>(id)] = user;
    Application& app = apps_[static_cast<std::size_t>(id)];
    if (topo_.ap_alive[static_cast<std::size_t>(ap)]) {
      app.activate(kNoServer);
      routes_[static_cast<std::size_t>(id)] = {topo_.user_link(user),
                                               topo_.ap_link(ap)};
    } else {
      pending_.push_back(id);
    }
  }
}

void Simulation::close_applications(StepLocal& local) {
  double step_cost_eps = 1e-15;
  for (auto& sv : servers_) {
    std::vector<AppId> native;
    for (AppId id : sv.hosted)
      if (apps_[static_cast<std::size_t>(id)].source == TrafficSource::Lora)
        native.push_back(id);
    std::vector<AppId> still_active;
    for (AppId id : native) {
      Application& app = apps_[static_cast<std::size_t>(id)];
      double cost = app.power_draw * cfg_.time_step;
      if (app.remaining_energy() < cost - step_cost_eps) {
        // Exhausted: the budget cannot fund another full step.
        double intended = std::ceil(app.energy_budget / cost);
        cont_sum_ += (app.energy_budget / cost) / intended;
        ++cont_n_;
        local.closed += 1;
        local.closed_remaining += app.remaining_energy();
        local.closed_consumption[static_cast<std::size_t>(sv.id)] += app.consumed;
        local.closed_mem[static_cast<std::size_t>(sv.id)] += app.mem_demand_mb;
        sv.release(app, clock_);
      } else {
        still_active.push_back(id);
      }
    }
    std::sort(still_active.begin(), still_active.end(), [&](AppId a, AppId b) {
      const auto& aa = apps_[static_cast<std::size_t>(a)];
      const auto& ab = apps_[static_cast<std::size_t>(b)];
      if (aa.arrival_time != ab.arrival_time) return aa.arrival_time < ab.arrival_time;
      return aa.id < ab.id;
    });
    auto graceful = static_cast<std::size_t>(
        cfg_.close_fraction * static_cast<double>(still_active.size()));
    for (std::size_t i = 0; i < graceful; ++i) {
      Application& app = apps_[static_cast<std::size_t>(still_active[i])];
      cont_sum_ += 1.0;  // closed by policy, not by resource shortfall
      ++cont_n_;
      local.closed += 1;
      local.closed_remaining += app.remaining_energy();
      local.closed_consumption[static_cast<std::size_t>(sv.id)] += app.consumed;
      local.closed_mem[static_cast<std::size_t>(sv.id)] += app.mem_demand_mb;
      sv.release(app, clock_);
    }
  }
}

std::vector<ServerRestorationRaw> Simulation::native_restoration(double elapsed_s) const {
  std::vector<ServerRestorationRaw> raws(servers_.size());
  for (std::size_t s = 0; s < servers_.size(); ++s) {
    const auto& sv = servers_[s];
    double rem_sum = 0.0;
    long long native_mem = 0;
    long long n_native = 0;
    for (AppId id : sv.hosted) {
      const auto& app = apps_[static_cast<std::size_t>(id)];
      if (app.source != TrafficSource::Lora) continue;
      rem_sum += app.remaining_energy();
      native_mem += app.mem_demand_mb;
      ++n_native;
    }
    double avg_rem = n_native > 0 ? rem_sum / static_cast<double>(n_native) : 0.0;
    double closed_cons = s < last_closed_consumption_.size()
                             ? last_closed_consumption_[s]
                             : 0.0;
    long long closed_mem = s < last_closed_mem_.size() ? last_closed_mem_[s] : 0;
    raws[s].raw_e = energy_restoration(closed_cons, avg_rem, cfg_.energy_per_app,
                                       cfg_.kappa_energy(), elapsed_s);
    double free_native = static_cast<double>(sv.mem_capacity_mb) -
                         static_cast<double>(native_mem);
    raws[s].raw_m = memory_restoration(
        static_cast<double>(closed_mem), free_native,
        static_cast<double>(native_alloc_mb_[s]), cfg_.mem_initial,
        cfg_.kappa_memory(), elapsed_s, MemoryRestorationMode::Additive);
  }
  return raws;
}

void Simulation::allocate_pending(StepLocal& local) {
  if (pending_.empty()) return;
  std::vector<Application*> pool;
  pool.reserve(pending_.size());
  for (AppId id : pending_) pool.push_back(&apps_[static_cast<std::size_t>(id)]);
  std::sort(pool.begin(), pool.end(), [](const Application* a, const Application* b) {
    if (a->arrival_time != b->arrival_time) return a->arrival_time < b->arrival_time;
    return a->id < b->id;
  });
  auto raws = native_restoration(clock_);
  auto thresholds = compute_thresholds(raws, cfg_.energy_per_app, cfg_.mem_initial,
                                       cfg_.delta_x_energy, cfg_.delta_y_memory);
  auto result = allocate(pool, servers_, raws, thresholds, cfg_);
  for (auto [id, server] : result.placements) {
    int user = psc_user_[static_cast<std::size_t>(id)];
    int gw = topo_.gateway_of_user(user);
    routes_[static_cast<std::size_t>(id)] = {
        topo_.user_link(user), topo_.gateway_link(gw),
        topo_.server_link(server), topo_.core_app_link()};
    ++psc_migrated_;
  }
  psc_rejected_ += static_cast<long long>(result.rejected.size());
  local.deadlock = result.deadlock;
  pending_.clear();
  // Rehoming candidates that found no server stay in the pool and retry.
  for (const auto& [id, reason] : result.rejected)
    if (apps_[static_cast<std::size_t>(id)].phase == AppPhase::Active)
      pending_.push_back(id);
}

void Simulation::accrue_energy() {
  for (auto& app : apps_) {
    if (app.phase != AppPhase::Active) continue;
    double cost = app.power_draw * cfg_.time_step;
    app.accrue(cost);
    if (app.host != kNoServer)
      servers_[static_cast<std::size_t>(app.host)].record_accrual(cost);
  }
}

std::vector<Route> Simulation::active_routes() const {
  std::vector<Route> out;
  out.reserve(infra_routes_.size() + apps_.size());
  for (std::size_t i = 0; i < infra_routes_.size(); ++i) {
    int ap = infra_ap_[i];
    if (ap >= 0 && !topo_.ap_alive[static_cast<std::size_t>(ap)]) continue;
    out.push_back(infra_routes_[i]);
  }
  for (std::size_t i = 0; i < apps_.size(); ++i) {
    if (apps_[i].phase != AppPhase::Active) continue;
    if (routes_[i].empty()) continue;
    out.push_back(routes_[i]);
  }
  return out;
}

MetricsSnapshot Simulation::observe(const StepLocal& local) {
  MetricsSnapshot snap;
  snap.step_time = clock_;
  auto routes = active_routes();
  snap.active_links = count_active_links(topo_, routes);
  snap.p_continuity_time =
      cont_n_ > 0 ? cont_sum_ / static_cast<double>(cont_n_) : 1.0;

  double provision = 0.0, consumed = 0.0, drain = 0.0;
  long long free_mem = 0;
  long long mem_drain = 0;
  for (const auto& sv : servers_) {
    provision += sv.energy_provision;
    consumed += sv.energy_consumed_total;
    drain += sv.energy_drain_last;
    free_mem += sv.free_mem_mb();
    mem_drain += std::max(0, sv.mem_drain_last_mb);
  }
  double p_energy = config_continuity(std::max(0.0, provision - consumed), drain,
                                      cfg_.horizon_steps());
  double p_memory = config_continuity(static_cast<double>(free_mem),
                                      static_cast<double>(mem_drain),
                                      cfg_.horizon_steps());
  // the tighter resource bounds the configuration's future
  snap.p_continuity_config = std::min(p_energy, p_memory);

  // Session-committed capacity gains. Every planned application claims one
  // slot provision; migrated PSC load claims slots on the LoRaWAN side.
  double slot_capacity = static_cast<double>(cfg_.n_servers) *
                         cfg_.slots_per_server * cfg_.energy_per_app;
  double committed_apps = static_cast<double>(cfg_.n_servers) * cfg_.k_apps +
                          static_cast<double>(committed_psc_);
  snap.energy_gain_j = std::max(0.0, slot_capacity - committed_apps * cfg_.energy_per_app);
  snap.energy_gain_pct = 100.0 * snap.energy_gain_j / slot_capacity;

  double alpha_mean = 0.5 * (cfg_.mem_per_app_min + cfg_.mem_per_app_max);
  double mem_capacity = static_cast<double>(cfg_.n_servers) * cfg_.mem_initial;
  long long admitted_mb = 0;
  long long admitted_n = 0;
  for (const auto& app : apps_) {
    bool lorawan_hosted = app.host != kNoServer &&
                          (app.phase == AppPhase::Active ||
                           app.phase == AppPhase::Closed);
    if (lorawan_hosted) {
      admitted_mb += app.mem_demand_mb;
      ++admitted_n;
    }
  }
  double future_apps = committed_apps - static_cast<double>(admitted_n);
  double committed_mb = static_cast<double>(admitted_mb) +
                        std::max(0.0, future_apps) * alpha_mean;
  snap.mem_gain_mb = std::max(0.0, mem_capacity - committed_mb);
  snap.mem_gain_pct = 100.0 * snap.mem_gain_mb / mem_capacity;

  // Self-enforcing decisions compare the with-PSC allocation against the
  // hypothetical without the migrated load.
  double q = snap.p_continuity_config;
  double gain_x_j = std::max(0.0, slot_capacity - static_cast<double>(cfg_.n_servers) *
                                                      cfg_.k_apps * cfg_.energy_per_app);
  auto se_e = energy_decision(q, gain_x_j, snap.energy_gain_j);
  snap.se_energy_value = se_e.value;
  snap.se_energy_label = se_e.label;
  double committed_mb_x = committed_mb -
                          static_cast<double>(committed_psc_) * alpha_mean;
  double gain_x_mb = std::max(0.0, mem_capacity - committed_mb_x);
  int tail_steps = std::max(1, cfg_.horizon_steps() - cfg_.session_steps());
  std::vector<double> tail(static_cast<std::size_t>(tail_steps),
                           q * snap.mem_gain_mb / tail_steps);
  auto se_m = memory_decision(q, gain_x_mb, tail);
  snap.se_mem_value = se_m.value;
  snap.se_mem_label = se_m.label;

  // Restoration of native resources as closures release them.
  auto raws = native_restoration(clock_);
  std::vector<double> raw_e(raws.size()), raw_m(raws.size());
  for (std::size_t i = 0; i < raws.size(); ++i) {
    raw_e[i] = raws[i].raw_e;
    raw_m[i] = raws[i].raw_m;
  }
  long long k_total = static_cast<long long>(cfg_.n_servers) * cfg_.k_apps;
  if (k_total > 0) {
    RestorationInputs rin;
    rin.k_closed = local.closed;
    rin.k_total = k_total;
    rin.links_active = snap.active_links;
    rin.links_total = topo_.total_links();
    rin.e_r_norm = normalize_over_servers(raw_e);
    rin.a_r_norm = normalize_over_servers(raw_m);
    rin.n1 = cfg_.n1;
    rin.n2 = cfg_.n2;
    snap.restoration = resource_restoration(rin);
  }

  long long k_closed_cfg = std::llround(cfg_.close_fraction * static_cast<double>(k_total));
  if (k_total > 0 && k_closed_cfg < k_total) {
    auto life = mean_lifetime(k_total, k_closed_cfg, cfg_.slots_per_server);
    snap.mean_lifetime_s = life.gamma_ext_s;
    long long remaining_apps = 0;
    for (const auto& app : apps_)
      if (app.phase == AppPhase::Active && app.host != kNoServer) ++remaining_apps;
    std::vector<double> drains(static_cast<std::size_t>(remaining_apps),
                               cfg_.power_draw * life.gamma_s);
    snap.survivable = survivability(std::max(0.0, provision - consumed), drains);
  }

  snap.remaining_energy_per_closing_app =
      local.closed > 0 ? local.closed_remaining / static_cast<double>(local.closed)
                       : 0.0;
  snap.closures = local.closed;
  snap.closure_remaining_sum = local.closed_remaining;
  snap.deadlock = local.deadlock;

  // Degradation-rate audit: each active application's consumption increment
  // against the decayed per-application bound. Paper-literal exponents use
  // the raw application count and collapse the bound to zero.
  double kappa_eff = cfg_.paper_literal_decay ? static_cast<double>(cfg_.k_apps)
                                              : cfg_.kappa_energy();
  double step_draw = cfg_.power_draw * cfg_.time_step;
  long long active_now = 0;
  for (const auto& app : apps_)
    if (app.phase == AppPhase::Active) ++active_now;
  if (active_now > 0 &&
      !degradation_ok(step_draw, cfg_.energy_per_app, kappa_eff, clock_))
    degradation_flags_ += active_now;

  s1_series_.push_back(q * snap.mem_gain_pct);
  s2_series_.push_back(q * snap.energy_gain_pct);
  if (s1_series_.size() >= 2) {
    snap.sustainability = average_sustainability(s1_series_, s2_series_).s_avg;
  } else {
    snap.sustainability = 0.5 * (s1_series_.back() + s2_series_.back());
  }
  return snap;
}

void Simulation::inject_failure(double fraction) {
  failed_aps_ = fail_access_points(topo_, fraction);
  // Pre-disaster PSC sessions homed on a failed AP migrate.
  for (auto& app : apps_) {
    if (app.source != TrafficSource::Psc || app.phase != AppPhase::Active ||
        app.host != kNoServer)
      continue;
    int ap = psc_ap_[static_cast<std::size_t>(app.id)];
    if (ap >= 0 && !topo_.ap_alive[static_cast<std::size_t>(ap)]) {
      routes_[static_cast<std::size_t>(app.id)].clear();
      pending_.push_back(app.id);
    }
  }
  // Session-plan PSC slots claimed on the LoRaWAN side.
  committed_psc_ = 0;
  int stride = ap_assignment_stride(cfg_.n_aps);
  for (long long i = 0; i < cfg_.k_apps; ++i) {
    int ap = static_cast<int>((i * stride) % cfg_.n_aps);
    if (!topo_.ap_alive[static_cast<std::size_t>(ap)]) ++committed_psc_;
  }
}

MetricsSnapshot Simulation::step() {
  if (clock_ >= cfg_.session_time - 1e-9)
    throw InvariantViolation("step past session end");
  int step_index = steps_done_ + 1;
  StepLocal local;
  local.closed_consumption.assign(servers_.size(), 0.0);
  local.closed_mem.assign(servers_.size(), 0);
  for (auto& sv : servers_) sv.begin_step();

  arrive_lora(step_index);
  arrive_psc(step_index);
  close_applications(local);
  last_closed_consumption_ = local.closed_consumption;
  last_closed_mem_.assign(local.closed_mem.begin(), local.closed_mem.end());
  allocate_pending(local);
  accrue_energy();
  clock_ += cfg_.time_step;
  ++steps_done_;
  MetricsSnapshot snap = observe(local);
  snapshots_.push_back(snap);
  return snap;
}

const std::vector<MetricsSnapshot>& Simulation::run() {
  inject_failure(cfg_.failure_fraction);
  int steps = cfg_.session_steps();
  for (int i = 0; i < steps; ++i) step();
  return snapshots_;
}

RunSummary Simulation::summary() const {
  RunSummary s;
  if (snapshots_.empty()) return s;
  s.avg_p_time = snapshots_.back().p_continuity_time;
  double pc = 0.0, ge = 0.0, gm = 0.0;
  for (const auto& snap : snapshots_) {
    pc += snap.p_continuity_config;
    ge += snap.energy_gain_pct;
    gm += snap.mem_gain_pct;
    s.closures += snap.closures;
    s.closure_remaining_sum += snap.closure_remaining_sum;
    s.any_deadlock = s.any_deadlock || snap.deadlock;
  }
  auto n = static_cast<double>(snapshots_.size());
  s.avg_p_config = pc / n;
  s.avg_energy_gain_pct = ge / n;
  s.avg_mem_gain_pct = gm / n;
  s.restoration_final = snapshots_.back().restoration;
  s.remaining_per_closing_avg =
      s.closures > 0 ? s.closure_remaining_sum / static_cast<double>(s.closures) : 0.0;
  s.mean_lifetime_ext_s = snapshots_.back().mean_lifetime_s;
  s.sustainability = snapshots_.back().sustainability;
  s.final_active_links = snapshots_.back().active_links;
  s.snapshot_hash = hash_snapshots(snapshots_);
  s.psc_total = psc_index_;
  s.psc_migrated = psc_migrated_;
  s.psc_rejected = psc_rejected_;
  s.degradation_flags = degradation_flags_;
  return s;
}

ObjectiveReport Simulation::objective() const {
  if (snapshots_.empty()) return ObjectiveReport{};
  const auto& last = snapshots_.back();
  auto raws = native_restoration(clock_);
  return objective_report(last.restoration, last.mean_lifetime_s, last.survivable,
                          raws, last.se_mem_value, last.se_energy_value);
}

RunResult run_scenario(const ScenarioConfig& config) {
  Simulation sim(config);
  RunResult out;
  out.snapshots = sim.run();
  out.summary = sim.summary();
  return out;
}

}  // namespace lorafall
