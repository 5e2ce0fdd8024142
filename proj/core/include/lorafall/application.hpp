#ifndef LORAFALL_APPLICATION_HPP_
#define LORAFALL_APPLICATION_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lorafall {

using AppId = std::int64_t;
using ServerId = int;

inline constexpr ServerId kNoServer = -1;  // access-tier hosted (AP path)

enum class TrafficSource { Psc, Lora };

enum class AppPhase { Pending, Active, Closed, Rejected };

struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// One application request. Legal phase paths are
// Pending -> Active -> Closed and Pending -> Rejected, nothing else.
struct Application {
  AppId id = 0;
  TrafficSource source = TrafficSource::Lora;
  int mem_demand_mb = 1;
  double power_draw = 0.0;     // J/s
  double energy_budget = 0.0;  // J at admission
  double consumed = 0.0;       // J so far
  double arrival_time = 0.0;   // s
  double close_time = -1.0;    // s, set on close
  AppPhase phase = AppPhase::Pending;
  ServerId host = kNoServer;

  double remaining_energy() const { return energy_budget - consumed; }

  void activate(ServerId server) {
    if (phase != AppPhase::Pending)
      throw InvariantViolation("activate from non-pending state");
    phase = AppPhase::Active;
    host = server;
  }

  void close(double at) {
    if (phase != AppPhase::Active)
      throw InvariantViolation("close from non-active state");
    phase = AppPhase::Closed;
    close_time = at;
  }

  void reject() {
    if (phase != AppPhase::Pending)
      throw InvariantViolation("reject from non-pending state");
    phase = AppPhase::Rejected;
  }

  void accrue(double joules) {
    if (phase != AppPhase::Active)
      throw InvariantViolation("accrue on non-active application");
    consumed += joules;
    if (consumed > energy_budget + 1e-9)
      throw InvariantViolation("consumed energy exceeds budget");
  }
};

std::string to_string(TrafficSource s);
std::string to_string(AppPhase p);

}  // namespace lorafall

#endif  // LORAFALL_APPLICATION_HPP_
