#include "lorafall/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lorafall {

double energy_restoration(double closed_consumption_j, double avg_remaining_j,
                          double e0, double kappa, double elapsed_s) {
  return (closed_consumption_j + avg_remaining_j) / e0 -
         e0 * std::exp(-kappa * elapsed_s);
}

double memory_restoration(double closed_mem_mb, double avg_remaining_mem_mb,
                          double allocated_mem_mb, double alpha0_mb,
                          double kappa, double elapsed_s,
                          MemoryRestorationMode mode) {
  if (mode == MemoryRestorationMode::Subtractive) {
    return (closed_mem_mb - avg_remaining_mem_mb) / alpha0_mb -
           alpha0_mb * std::exp(-kappa * elapsed_s);
  }
  return (closed_mem_mb + avg_remaining_mem_mb - allocated_mem_mb) / alpha0_mb;
}

std::vector<double> normalize_over_servers(std::span<const double> raw_values) {
  double max_abs = 0.0;
  for (double v : raw_values) max_abs = std::max(max_abs, std::abs(v));
  std::vector<double> out(raw_values.size(), 0.0);
  if (max_abs == 0.0) return out;
  for (std::size_t i = 0; i < raw_values.size(); ++i)
    out[i] = std::max(0.0, raw_values[i] / max_abs);
  return out;
}

namespace {

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double resource_restoration(const RestorationInputs& in) {
  if (in.k_total == 0 || in.links_total == 0)
    throw MetricsError("empty_network");
  if (in.n1 + in.n2 <= 0.0) throw MetricsError("zero_weights");
  double closure_ratio =
      static_cast<double>(in.k_closed) / static_cast<double>(in.k_total);
  double link_ratio =
      static_cast<double>(in.links_active) / static_cast<double>(in.links_total);
  double weighted = (in.n1 * mean(in.e_r_norm) + in.n2 * mean(in.a_r_norm)) /
                    (in.n1 + in.n2);
  return closure_ratio * link_ratio * weighted;
}

MeanLifetime mean_lifetime(long long k_total, long long k_closed, int slots) {
  if (k_total == k_closed) throw MetricsError("lifetime_singular");
  if (k_total < k_closed) throw MetricsError("closures_exceed_total");
  double gamma = 1.0 / static_cast<double>(k_total - k_closed);
  return {gamma, slots * gamma};
}

bool survivability(double delta_e, std::span<const double> per_app_drain) {
  double demand = std::accumulate(per_app_drain.begin(), per_app_drain.end(), 0.0);
  return delta_e >= demand;
}

namespace {

double trapezoid_mean(std::span<const double> series) {
  if (series.size() < 2) throw MetricsError("sustainability_needs_two_samples");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < series.size(); ++i)
    sum += 0.5 * (series[i] + series[i + 1]);
  return sum / static_cast<double>(series.size() - 1);
}

}  // namespace

Sustainability average_sustainability(std::span<const double> mem_gain_series,
                                      std::span<const double> energy_gain_series) {
  Sustainability s;
  s.s1 = trapezoid_mean(mem_gain_series);
  s.s2 = trapezoid_mean(energy_gain_series);
  s.s_avg = 0.5 * (s.s1 + s.s2);
  return s;
}

double config_continuity(double remaining_resource, double per_step_drain,
                         int horizon_steps) {
  if (per_step_drain <= 0.0) return 1.0;
  double sustainable = remaining_resource / (per_step_drain * horizon_steps);
  return std::clamp(sustainable, 0.0, 1.0);
}

ContinuityProbabilities continuity_probabilities(
    std::span<const double> time_ratio_records, double remaining_resource,
    double per_step_drain, int horizon_steps) {
  ContinuityProbabilities out;
  if (!time_ratio_records.empty())
    out.p_time = std::accumulate(time_ratio_records.begin(),
                                 time_ratio_records.end(), 0.0) /
                 static_cast<double>(time_ratio_records.size());
  out.p_config =
      config_continuity(remaining_resource, per_step_drain, horizon_steps);
  return out;
}

}  // namespace lorafall
