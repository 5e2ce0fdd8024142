#ifndef LORAFALL_ALLOCATOR_HPP_
#define LORAFALL_ALLOCATOR_HPP_

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lorafall/agreement.hpp"
#include "lorafall/config.hpp"
#include "lorafall/server.hpp"

namespace lorafall {

enum class ResourceBasis { Memory, Energy };
enum class SelectionMode { Relaxed, Strict };

struct DecayInfo {
  double lambda_per_s = 0.0;  // fractional drain per second; +inf when exhausted
  double level = 0.0;         // D_i = D0 * exp(-lambda_i * t)
  bool exhausted = false;
};

// lambda_i = (drain per step / remaining resource) / step seconds.
// D0 is the server's initial resource level on the chosen basis.
DecayInfo decay_rate(const ServerState& server, ResourceBasis basis,
                     double step_seconds);

// Available servers ordered by ascending decay rate (ties by id).
// Relaxed: lifetime >= min_required_time OR minimum decay level.
// Strict: both memory and energy lifetimes must pass.
// Exhausted servers are never available.
std::vector<ServerId> select_available_servers(std::span<const ServerState> servers,
                                               double min_required_time_s,
                                               SelectionMode mode,
                                               double step_seconds);

struct EquilibriumThresholds {
  double alpha_th_mb = 0.0;
  double e_th_j = 0.0;
  int delta_x = 1;
  int delta_y = 1;
};

// Per-server restoration levels carried into threshold/equilibrium checks.
struct ServerRestorationRaw {
  double raw_e = 0.0;
  double raw_m = 0.0;
};

// Thresholds from the weakest native (LoRa-only) restoration level,
// denormalized against e0 / alpha0 and clamped non-negative.
EquilibriumThresholds compute_thresholds(std::span<const ServerRestorationRaw> lora_only,
                                         double e0, double alpha0_mb,
                                         int delta_x, int delta_y);

// The three equilibrium conditions: per-server restorations against
// thresholds for every available server, plus the initial-resource decay
// inequalities with the delta_x / delta_y instance counts.
bool equilibrium_holds(std::span<const ServerState> servers,
                       std::span<const ServerRestorationRaw> current,
                       std::span<const ServerId> bprime,
                       const EquilibriumThresholds& thresholds,
                       const ScenarioConfig& config);

struct AllocationResult {
  std::vector<std::pair<AppId, ServerId>> placements;
  std::vector<std::pair<AppId, std::string>> rejected;
  bool deadlock = false;
  int iterations = 0;
  int threshold_adjustments = 0;
  bool equilibrium_satisfied = false;
  EquilibriumThresholds final_thresholds;
};

inline constexpr double kThresholdRelaxation = 0.9;
inline constexpr int kMaxThresholdAdjustments = 10;

// FCFS placement of the pending pool onto available servers. Thresholds are
// geometrically relaxed while the equilibrium conditions fail; a pool that
// cannot reach equilibrium, or an application no server can host, is the
// deadlock outcome. Placement mutates the server accounting.
AllocationResult allocate(std::span<Application*> pool,
                          std::span<ServerState> servers,
                          std::span<const ServerRestorationRaw> restoration,
                          EquilibriumThresholds thresholds,
                          const ScenarioConfig& config);

struct ObjectiveReport {
  double restoration = 0.0;
  double mean_lifetime_ext_s = 0.0;
  bool survivable = false;
  bool e_restoration_nonneg = false;
  bool a_restoration_nonneg = false;
  double memory_reverse_value = 0.0;  // reverse-strategy memory value
  double energy_reverse_value = 0.0;  // reverse-strategy energy value
  bool constraints_satisfied = false;
};

ObjectiveReport objective_report(double restoration, double mean_lifetime_ext_s,
                                 bool survivable,
                                 std::span<const ServerRestorationRaw> raws,
                                 double memory_reverse_value,
                                 double energy_reverse_value);

}  // namespace lorafall

#endif  // LORAFALL_ALLOCATOR_HPP_
