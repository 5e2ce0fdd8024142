#include "lorafall/agreement.hpp"

#include <cmath>
#include <numeric>

namespace lorafall {

AgreementLabel classify(double value) {
  if (std::abs(value) <= kTieTolerance) return AgreementLabel::Continue;
  return value < 0.0 ? AgreementLabel::Reset : AgreementLabel::Expand;
}

std::string to_string(AgreementLabel label) {
  switch (label) {
    case AgreementLabel::Reset: return "Reset";
    case AgreementLabel::Continue: return "Continue";
    case AgreementLabel::Expand: return "Expand";
  }
  return "?";
}

bool memory_feasible(std::span<const int> app_mem_mb, int server_free_mb,
                     long long network_available_mb) {
  long long total = 0;
  for (int m : app_mem_mb) {
    if (m > server_free_mb) return false;
    total += m;
  }
  return total <= network_available_mb;
}

double memory_availability_probability(std::span<const double> ratios) {
  if (ratios.empty()) throw AgreementError("empty_horizon");
  double sum = std::accumulate(ratios.begin(), ratios.end(), 0.0);
  return sum / static_cast<double>(ratios.size());
}

double per_server_memory_gain(std::span<const double> surplus) {
  return std::accumulate(surplus.begin(), surplus.end(), 0.0);
}

double network_memory_gain(const std::vector<std::vector<double>>& gains) {
  double total = 0.0;
  for (const auto& row : gains)
    total += per_server_memory_gain(row);
  return total;
}

double expected_memory_gain(double q_t, std::span<const double> per_app_surplus) {
  double total = 0.0;
  for (double s : per_app_surplus) total += q_t * s;
  return total;
}

AgreementDecision memory_decision(double q_t, double delta_alpha_x,
                                  std::span<const double> tail_terms) {
  double tail = std::accumulate(tail_terms.begin(), tail_terms.end(), 0.0);
  double value = q_t * delta_alpha_x - tail;
  return {value, classify(value)};
}

double energy_consumed(std::span<const PowerDuration> apps) {
  double total = 0.0;
  for (const auto& a : apps) total += a.power_draw * a.active_seconds;
  return total;
}

bool degradation_ok(double consumed_delta, double e0, double kappa, double elapsed) {
  return consumed_delta <= e0 * std::exp(-kappa * elapsed);
}

double q_tail_probability(std::span<const double> p_series, int boundary) {
  double tail = 0.0;
  for (int i = boundary + 1; i < static_cast<int>(p_series.size()); ++i)
    tail += p_series[static_cast<std::size_t>(i)];
  return tail;
}

bool energy_requirement_ok(std::span<const double> required_per_step,
                           double delta_e, bool strict, double strictness_factor) {
  double sum = std::accumulate(required_per_step.begin(), required_per_step.end(), 0.0);
  return strict ? sum <= strictness_factor * delta_e : sum <= delta_e;
}

double expected_energy_gain(double q_e, double delta_e) { return q_e * delta_e; }

AgreementDecision energy_decision(double q_e, double delta_e_x, double delta_e) {
  double value = q_e * delta_e_x - q_e * delta_e;
  return {value, classify(value)};
}

}  // namespace lorafall
