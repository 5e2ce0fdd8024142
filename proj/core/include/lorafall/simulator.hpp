#ifndef LORAFALL_SIMULATOR_HPP_
#define LORAFALL_SIMULATOR_HPP_

#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "lorafall/agreement.hpp"
#include "lorafall/allocator.hpp"
#include "lorafall/config.hpp"
#include "lorafall/metrics.hpp"
#include "lorafall/server.hpp"
#include "lorafall/topology.hpp"

namespace lorafall {

struct MetricsSnapshot {
  double step_time = 0.0;
  int active_links = 0;
  double p_continuity_time = 1.0;
  double p_continuity_config = 1.0;
  double restoration = 0.0;
  double mem_gain_mb = 0.0;
  double mem_gain_pct = 0.0;
  double energy_gain_j = 0.0;
  double energy_gain_pct = 0.0;
  double remaining_energy_per_closing_app = 0.0;
  double mean_lifetime_s = 0.0;
  bool survivable = true;
  double sustainability = 0.0;
  double se_mem_value = 0.0;
  AgreementLabel se_mem_label = AgreementLabel::Continue;
  double se_energy_value = 0.0;
  AgreementLabel se_energy_label = AgreementLabel::Continue;
  bool deadlock = false;
  // step-local accounting used by aggregates
  long long closures = 0;
  double closure_remaining_sum = 0.0;
};

struct RunSummary {
  double avg_p_time = 1.0;          // closure-weighted continuity over time
  double avg_p_config = 1.0;        // step mean
  double restoration_final = 0.0;   // level reached at session end
  double avg_energy_gain_pct = 0.0;
  double avg_mem_gain_pct = 0.0;
  long long closures = 0;
  double closure_remaining_sum = 0.0;
  double remaining_per_closing_avg = 0.0;
  double mean_lifetime_ext_s = 0.0;
  double sustainability = 0.0;
  bool any_deadlock = false;
  int final_active_links = 0;
  std::uint64_t snapshot_hash = 0;
  long long psc_total = 0;
  long long psc_migrated = 0;
  long long psc_rejected = 0;
  // Steps whose per-application consumption increment exceeded the decayed
  // degradation bound. Always the full count in paper-literal mode.
  long long degradation_flags = 0;
};

std::uint64_t hash_snapshots(std::span<const MetricsSnapshot> snaps);

// Stride coprime to the AP count so each arrival cohort samples the AP
// tier uniformly instead of hitting consecutive ids.
int ap_assignment_stride(int n_aps);

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config);

  // Marks the first floor(fraction*|S|) APs failed; PSC traffic homed on a
  // failed AP joins the migration pool.
  void inject_failure(double fraction);

  MetricsSnapshot step();

  // inject_failure(config.failure_fraction) at t=0, then one step per
  // session slot.
  const std::vector<MetricsSnapshot>& run();

  RunSummary summary() const;

  // Audit view of the optimization terms after the last observed step.
  ObjectiveReport objective() const;

  const ScenarioConfig& config() const { return cfg_; }
  const Topology& topology() const { return topo_; }
  const std::vector<ServerState>& servers() const { return servers_; }
  const std::vector<Application>& applications() const { return apps_; }
  const std::vector<MetricsSnapshot>& snapshots() const { return snapshots_; }
  double clock() const { return clock_; }
  std::vector<Route> active_routes() const;
  std::vector<ServerRestorationRaw> native_restoration(double elapsed_s) const;

 private:
  struct StepLocal {
    long long closed = 0;
    double closed_remaining = 0.0;
    std::vector<double> closed_consumption;  // per server, J
    std::vector<long long> closed_mem;       // per server, MB
    bool deadlock = false;
  };

  void arrive_lora(int step_index);
  void arrive_psc(int step_index);
  void close_applications(StepLocal& local);
  void allocate_pending(StepLocal& local);
  void accrue_energy();
  MetricsSnapshot observe(const StepLocal& local);

  AppId new_app(TrafficSource source, double budget, double arrival);
  int draw_alpha();
  int poisson_count(double mean);
  int gateway_for_server(ServerId s, long long arrival_index) const;

  ScenarioConfig cfg_;
  Topology topo_;
  std::vector<ServerState> servers_;
  std::vector<Application> apps_;
  std::vector<Route> routes_;              // parallel to apps_
  std::vector<int> psc_ap_;                // parallel; -1 for non-PSC
  std::deque<AppId> pending_;              // FCFS migration pool
  std::vector<int> psc_user_;              // parallel; -1 for non-PSC
  std::vector<Route> infra_routes_;        // ambient AP / gateway streams
  std::vector<int> infra_ap_;              // AP id or -1 for gateway streams
  std::vector<long long> lora_arrivals_per_server_;
  std::vector<long long> native_alloc_mb_;          // session-admitted MB per server
  std::vector<double> last_closed_consumption_;     // J per server, this step
  std::vector<long long> last_closed_mem_;          // MB per server, this step
  std::vector<int> lora_sched_;
  std::vector<int> psc_sched_;
  std::mt19937_64 rng_;
  double clock_ = 0.0;
  int steps_done_ = 0;
  int failed_aps_ = 0;
  long long psc_index_ = 0;
  long long committed_psc_ = 0;  // PSC whose home AP is failed, whole session
  double cont_sum_ = 0.0;        // closure continuity samples
  long long cont_n_ = 0;
  std::vector<double> s1_series_;
  std::vector<double> s2_series_;
  std::vector<MetricsSnapshot> snapshots_;
  long long psc_rejected_ = 0;
  long long psc_migrated_ = 0;
  long long degradation_flags_ = 0;
};

// Convenience wrapper: validate, run, summarize.
struct RunResult {
  std::vector<MetricsSnapshot> snapshots;
  RunSummary summary;
};
RunResult run_scenario(const ScenarioConfig& config);

}  // namespace lorafall

#endif  // LORAFALL_SIMULATOR_HPP_
