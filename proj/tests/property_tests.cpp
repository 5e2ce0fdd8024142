// Property checks over randomized inputs. Hand-rolled generators keep the
// suite dependency-free and reproducible; failures print file and line.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <vector>

#include "lorafall/agreement.hpp"
#include "lorafall/allocator.hpp"
#include "lorafall/metrics.hpp"
#include "lorafall/topology.hpp"

using namespace lorafall;

namespace {

int g_failures = 0;

#define REQUIRE_PROP(cond, msg)                                           \
  do {                                                                    \
    if (!(cond)) {                                                        \
      std::fprintf(stderr, "[FAIL] %s:%d %s\n", __FILE__, __LINE__, msg); \
      ++g_failures;                                                       \
      return;                                                             \
    }                                                                     \
  } while (0)

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

void topology_closed_form(std::mt19937_64& rng) {
  for (int i = 0; i < 200; ++i) {
    ScenarioConfig c;
    c.n_servers = 1 + static_cast<int>(rng() % 40);
    c.n_gateways = 1 + static_cast<int>(rng() % 200);
    c.n_aps = 1 + static_cast<int>(rng() % 200);
    c.n_users = 1 + static_cast<int>(rng() % 2000);
    auto t = build_topology(c);
    REQUIRE_PROP(t.total_links() ==
                     1 + c.n_servers + c.n_gateways + c.n_aps + c.n_users,
                 "link count deviates from 1+B+L+S+E");
  }
  std::puts("[ok] topology link count closed form (200 cases)");
}

void state_machine_fuzz(std::mt19937_64& rng) {
  for (int i = 0; i < 2000; ++i) {
    Application a;
    a.id = i;
    a.energy_budget = 1.0;
    int path = 0;  // 0 pending, 1 active, 2 terminal
    for (int t = 0; t < 6 && path != 2; ++t) {
      int op = static_cast<int>(rng() % 3);
      bool threw = false;
      try {
        if (op == 0) a.activate(0);
        else if (op == 1) a.close(1.0);
        else a.reject();
      } catch (const InvariantViolation&) {
        threw = true;
      }
      bool was_legal = (op == 0 && path == 0) || (op == 1 && path == 1) ||
                       (op == 2 && path == 0);
      REQUIRE_PROP(threw != was_legal, "transition legality mismatch");
      if (was_legal) path = (op == 0) ? 1 : 2;
    }
  }
  std::puts("[ok] application state machine admits only the two legal paths");
}

void server_memory_accounting(std::mt19937_64& rng) {
  ServerState sv;
  sv.id = 0;
  sv.mem_capacity_mb = 1000;
  sv.slots = 64;
  std::vector<Application> apps;
  apps.reserve(512);
  std::vector<AppId> active;
  long long expected = 0;
  for (int t = 0; t < 400; ++t) {
    bool admit = active.empty() || (rng() % 2 == 0);
    if (admit && apps.size() < 500) {
      Application a;
      a.id = static_cast<AppId>(apps.size());
      a.mem_demand_mb = 1 + static_cast<int>(rng() % 10);
      a.energy_budget = 1.0;
      apps.push_back(a);
      Application& ref = apps.back();
      if (sv.fits(ref)) {
        sv.admit(ref);
        active.push_back(ref.id);
        expected += ref.mem_demand_mb;
      }
    } else if (!active.empty()) {
      std::size_t pick = rng() % active.size();
      AppId id = active[pick];
      active.erase(active.begin() + static_cast<long>(pick));
      sv.release(apps[static_cast<std::size_t>(id)], 1.0);
      expected -= apps[static_cast<std::size_t>(id)].mem_demand_mb;
    }
    REQUIRE_PROP(sv.mem_used_mb == expected, "mem_used drifted from hosted sum");
    REQUIRE_PROP(sv.slots_used == static_cast<int>(active.size()), "slot drift");
  }
  std::puts("[ok] server memory accounting exact under admit/release fuzz");
}

void trichotomy_and_scaling(std::mt19937_64& rng) {
  for (int i = 0; i < 10000; ++i) {
    double q = unit(rng);
    double dx = (unit(rng) - 0.5) * 20.0;
    double de = (unit(rng) - 0.5) * 20.0;
    auto d = energy_decision(q, dx, de);
    REQUIRE_PROP(d.label == classify(d.value), "label must match the value sign");
    double c = 0.25 + 4.0 * unit(rng);
    auto scaled = energy_decision(q, c * dx, c * de);
    if (d.label != AgreementLabel::Continue)
      REQUIRE_PROP(scaled.label == d.label,
                   "positive scaling must preserve the label");
  }
  std::puts("[ok] decision trichotomy totality and scale invariance (1e4 cases)");
}

void gain_linearity(std::mt19937_64& rng) {
  for (int i = 0; i < 500; ++i) {
    double q = unit(rng);
    std::vector<double> a, b, both;
    for (std::uint64_t k = 0, n = rng() % 8; k < n; ++k)
      a.push_back(unit(rng) * 10.0);
    for (std::uint64_t k = 0, n = rng() % 8; k < n; ++k)
      b.push_back(unit(rng) * 10.0);
    both = a;
    both.insert(both.end(), b.begin(), b.end());
    double lhs = expected_memory_gain(q, both);
    double rhs = expected_memory_gain(q, a) + expected_memory_gain(q, b);
    REQUIRE_PROP(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)),
                 "expected gain must be additive over concatenation");
  }
  std::puts("[ok] expected memory gain linear under series concatenation");
}

void double_sum_consistency(std::mt19937_64& rng) {
  for (int i = 0; i < 200; ++i) {
    std::vector<std::vector<double>> m(1 + rng() % 6);
    double row_sums = 0.0;
    for (auto& row : m) {
      row.resize(1 + rng() % 6);
      for (auto& v : row) v = (unit(rng) - 0.25) * 8.0;
      row_sums += per_server_memory_gain(row);
    }
    REQUIRE_PROP(network_memory_gain(m) == row_sums,
                 "double sum must equal the sum of row gains exactly");
  }
  std::puts("[ok] network gain double-sum equals per-server sums exactly");
}

void tail_head_unity(std::mt19937_64& rng) {
  for (int i = 0; i < 500; ++i) {
    std::size_t n = 2 + rng() % 40;
    std::vector<double> p(n);
    double sum = 0.0;
    for (auto& v : p) {
      v = unit(rng) + 1e-6;
      sum += v;
    }
    for (auto& v : p) v /= sum;
    int boundary = static_cast<int>(rng() % n);
    double head = 0.0;
    for (int k = 0; k <= boundary; ++k) head += p[static_cast<std::size_t>(k)];
    double tail = q_tail_probability(p, boundary);
    REQUIRE_PROP(std::abs(head + tail - 1.0) <= 1e-12, "head+tail must be 1");
  }
  std::puts("[ok] q_tail + head mass = 1 within 1e-12 (500 cases)");
}

void normalization_peak(std::mt19937_64& rng) {
  for (int i = 0; i < 300; ++i) {
    std::vector<double> raw(1 + rng() % 10);
    for (auto& v : raw) v = (unit(rng) - 0.5) * 6.0;
    auto n = normalize_over_servers(raw);
    double peak = 0.0;
    bool peak_positive = false;
    for (double v : raw) {
      if (std::abs(v) > peak) {
        peak = std::abs(v);
        peak_positive = v > 0.0;
      }
    }
    double mx = 0.0;
    for (double v : n) {
      REQUIRE_PROP(v >= 0.0 && v <= 1.0, "norms must stay in [0,1]");
      mx = std::max(mx, v);
    }
    if (peak_positive)
      REQUIRE_PROP(std::abs(mx - 1.0) <= 1e-12,
                   "norm peak must be exactly 1 when the extreme raw is positive");
  }
  std::puts("[ok] max-normalization peaks at 1 and stays in [0,1]");
}

void restoration_monotonicity(std::mt19937_64& rng) {
  for (int i = 0; i < 300; ++i) {
    RestorationInputs in;
    in.k_total = 100;
    in.k_closed = static_cast<long long>(rng() % 50);
    in.links_active = 100 + static_cast<int>(rng() % 1000);
    in.links_total = 1211;
    in.e_r_norm = {unit(rng)};
    in.a_r_norm = {unit(rng)};
    double base = resource_restoration(in);
    auto more_closed = in;
    more_closed.k_closed += 1 + static_cast<long long>(rng() % 10);
    REQUIRE_PROP(resource_restoration(more_closed) >= base,
                 "restoration must be monotone in closures");
    auto more_norm = in;
    more_norm.e_r_norm[0] = std::min(1.0, in.e_r_norm[0] + unit(rng));
    more_norm.a_r_norm[0] = std::min(1.0, in.a_r_norm[0] + unit(rng));
    REQUIRE_PROP(resource_restoration(more_norm) >= base - 1e-15,
                 "restoration must be monotone in the norms");
  }
  std::puts("[ok] restoration monotone in closures and norms");
}

void sustainability_bounds(std::mt19937_64& rng) {
  for (int i = 0; i < 200; ++i) {
    std::vector<double> s(2 + rng() % 30);
    double lo = 1e300, hi = -1e300;
    for (auto& v : s) {
      v = (unit(rng) - 0.3) * 50.0;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    auto r = average_sustainability(s, s);
    REQUIRE_PROP(r.s_avg >= lo - 1e-9 && r.s_avg <= hi + 1e-9,
                 "sustainability must stay within the series range");
  }
  std::puts("[ok] sustainability bounded by the series extremes");
}

void survivability_monotone(std::mt19937_64& rng) {
  for (int i = 0; i < 300; ++i) {
    std::vector<double> drains(rng() % 20);
    for (auto& d : drains) d = unit(rng) * 0.01;
    double e = unit(rng) * 0.1;
    bool before = survivability(e, drains);
    drains.push_back(unit(rng) * 0.01 + 1e-9);
    bool after = survivability(e, drains);
    REQUIRE_PROP(!(after && !before),
                 "adding load must never restore availability");
  }
  std::puts("[ok] survivability monotone under added load");
}

void allocator_fcfs_and_safety(std::mt19937_64& rng) {
  for (int i = 0; i < 200; ++i) {
    ScenarioConfig cfg;
    int n_servers = 1 + static_cast<int>(rng() % 3);
    cfg.n_servers = n_servers;
    cfg.slots_per_server = 1 + static_cast<int>(rng() % 4);
    cfg.k_apps = 10;
    std::vector<ServerState> servers;
    for (int s = 0; s < n_servers; ++s) {
      ServerState sv;
      sv.id = s;
      sv.mem_capacity_mb = 10 + static_cast<int>(rng() % 31);
      sv.slots = cfg.slots_per_server;
      sv.energy_provision = sv.slots * cfg.energy_per_app;
      sv.initial_energy = sv.slots * cfg.energy_per_app;
      servers.push_back(sv);
    }
    int n_apps = 1 + static_cast<int>(rng() % 6);
    std::vector<Application> apps(static_cast<std::size_t>(n_apps));
    std::vector<Application*> pool;
    for (int a = 0; a < n_apps; ++a) {
      auto& app = apps[static_cast<std::size_t>(a)];
      app.id = a;
      app.mem_demand_mb = 1 + static_cast<int>(rng() % 15);
      app.energy_budget = cfg.energy_per_app * unit(rng);
      app.arrival_time = static_cast<double>(a / 2);
      pool.push_back(&app);
    }
    std::vector<ServerRestorationRaw> raws(static_cast<std::size_t>(n_servers));
    auto res = allocate(pool, servers, raws, {}, cfg);
    for (const auto& sv : servers) {
      REQUIRE_PROP(sv.mem_used_mb <= sv.mem_capacity_mb, "memory overcommit");
      REQUIRE_PROP(sv.slots_used <= sv.slots, "slot overcommit");
    }
    for (std::size_t p = 1; p < res.placements.size(); ++p) {
      const auto& prev = apps[static_cast<std::size_t>(res.placements[p - 1].first)];
      const auto& cur = apps[static_cast<std::size_t>(res.placements[p].first)];
      bool ordered = prev.arrival_time < cur.arrival_time ||
                     (prev.arrival_time == cur.arrival_time && prev.id < cur.id);
      REQUIRE_PROP(ordered, "placements must preserve FCFS order");
    }
    REQUIRE_PROP(!res.deadlock || !res.rejected.empty(),
                 "deadlock implies a rejected application");
    REQUIRE_PROP(res.placements.size() + res.rejected.size() ==
                     static_cast<std::size_t>(n_apps),
                 "pool must partition into placements and rejections");
  }
  std::puts("[ok] allocator capacity safety + FCFS order (200 cases)");
}

void selection_never_empty(std::mt19937_64& rng) {
  for (int i = 0; i < 200; ++i) {
    std::vector<ServerState> servers;
    int n = 1 + static_cast<int>(rng() % 5);
    bool any_finite = false;
    for (int s = 0; s < n; ++s) {
      ServerState sv;
      sv.id = s;
      sv.mem_capacity_mb = 100;
      sv.slots = 4;
      sv.initial_energy = 0.1;
      sv.energy_provision = 0.1;
      if (rng() % 4 == 0) {
        sv.energy_consumed_total = 0.1;  // exhausted
      } else {
        sv.mem_used_mb = static_cast<int>(rng() % 100);
        sv.mem_drain_last_mb = static_cast<int>(rng() % 120);
        sv.energy_drain_last = unit(rng) * 0.2;
        any_finite = true;
      }
      servers.push_back(sv);
    }
    auto sel = select_available_servers(servers, 360.0, SelectionMode::Relaxed, 360.0);
    if (any_finite)
      REQUIRE_PROP(!sel.empty(), "relaxed selection empty despite finite decay");
  }
  std::puts("[ok] relaxed selection keeps the minimum-decay server");
}

}  // namespace

int main() {
  std::mt19937_64 rng(0x5eedf00dull);
  topology_closed_form(rng);
  state_machine_fuzz(rng);
  server_memory_accounting(rng);
  trichotomy_and_scaling(rng);
  gain_linearity(rng);
  double_sum_consistency(rng);
  tail_head_unity(rng);
  normalization_peak(rng);
  restoration_monotonicity(rng);
  sustainability_bounds(rng);
  survivability_monotone(rng);
  allocator_fcfs_and_safety(rng);
  selection_never_empty(rng);
  if (g_failures == 0) std::puts("all properties hold");
  return g_failures == 0 ? 0 : 1;
}
