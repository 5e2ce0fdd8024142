#include "lorafall/application.hpp"

namespace lorafall {

std::string to_string(TrafficSource s) {
  return s == TrafficSource::Psc ? "psc" : "lora";
}

std::string to_string(AppPhase p) {
  switch (p) {
    case AppPhase::Pending: return "pending";
    case AppPhase::Active: return "active";
    case AppPhase::Closed: return "closed";
    case AppPhase::Rejected: return "rejected";
  }
  return "?";
}

}  // namespace lorafall
