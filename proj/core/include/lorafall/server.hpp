#ifndef LORAFALL_SERVER_HPP_
#define LORAFALL_SERVER_HPP_

#include <vector>

#include "lorafall/application.hpp"

namespace lorafall {

// Per-server resource pools and accounting. Mutated only by the
// single-threaded simulation loop and the allocator it drives.
struct ServerState {
  ServerId id = 0;
  int mem_capacity_mb = 0;
  int mem_used_mb = 0;
  int slots = 0;
  int slots_used = 0;
  std::vector<AppId> hosted;
  double energy_consumed_total = 0.0;  // J, non-decreasing
  double energy_provision = 0.0;       // J budgeted for the session's own load
  double initial_energy = 0.0;         // J, slots * per-app provision
  // Last-step drains feed the decay-rate game.
  int mem_drain_last_mb = 0;
  double energy_drain_last = 0.0;

  int free_mem_mb() const { return mem_capacity_mb - mem_used_mb; }
  int free_slots() const { return slots - slots_used; }
  double energy_headroom() const {
    double h = energy_provision - energy_consumed_total;
    return h > 0.0 ? h : 0.0;
  }

  bool fits(const Application& app) const {
    return app.mem_demand_mb <= free_mem_mb() && free_slots() > 0;
  }

  void admit(Application& app) {
    if (!fits(app)) throw InvariantViolation("admit without capacity");
    if (app.phase == AppPhase::Pending) {
      app.activate(id);
    } else if (app.phase == AppPhase::Active && app.host == kNoServer) {
      app.host = id;  // rehomed from a failed access point
    } else {
      throw InvariantViolation("admit on ineligible application");
    }
    mem_used_mb += app.mem_demand_mb;
    slots_used += 1;
    hosted.push_back(app.id);
  }

  void release(Application& app, double at) {
    app.close(at);
    mem_used_mb -= app.mem_demand_mb;
    slots_used -= 1;
    if (mem_used_mb < 0 || slots_used < 0)
      throw InvariantViolation("negative resource accounting");
    std::erase(hosted, app.id);
  }

  void record_accrual(double joules) {
    energy_consumed_total += joules;
    energy_drain_last += joules;
  }

  void begin_step() {
    energy_drain_last = 0.0;
    mem_drain_last_mb = 0;
  }
};

}  // namespace lorafall

#endif  // LORAFALL_SERVER_HPP_
