#ifndef LORAFALL_METRICS_HPP_
#define LORAFALL_METRICS_HPP_

#include <span>
#include <stdexcept>
#include <vector>

namespace lorafall {

struct MetricsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raw (un-normalized) energy restoration of one server:
//   (closed_consumption + avg_remaining) / e0 - e0 * exp(-kappa * elapsed)
double energy_restoration(double closed_consumption_j, double avg_remaining_j,
                          double e0, double kappa, double elapsed_s);

enum class MemoryRestorationMode {
  Subtractive,  // (closed - avg_remaining)/alpha0 - alpha0*exp(-kappa*elapsed)
  Additive,     // (closed + avg_remaining - allocated)/alpha0
};

double memory_restoration(double closed_mem_mb, double avg_remaining_mem_mb,
                          double allocated_mem_mb, double alpha0_mb,
                          double kappa, double elapsed_s,
                          MemoryRestorationMode mode = MemoryRestorationMode::Additive);

// Max-normalization over the server set; all-zero input stays zero and
// negative raws clamp to zero after scaling.
std::vector<double> normalize_over_servers(std::span<const double> raw_values);

struct RestorationInputs {
  long long k_closed = 0;
  long long k_total = 0;
  int links_active = 0;
  int links_total = 0;
  std::vector<double> e_r_norm;  // per server, in [0,1]
  std::vector<double> a_r_norm;  // per server, in [0,1]
  double n1 = 0.5;
  double n2 = 0.3;
};

// (K'/K * L_A/L_T) * (n1*||E_R|| + n2*||a_R||)/(n1+n2), averaged over servers.
// Throws `empty_network` when k_total or links_total is zero.
double resource_restoration(const RestorationInputs& in);

struct MeanLifetime {
  double gamma_s;        // 1 / (K - K')
  double gamma_ext_s;    // S0 * gamma
};

// Throws `lifetime_singular` when k_total == k_closed.
MeanLifetime mean_lifetime(long long k_total, long long k_closed, int slots);

// Available iff delta_e covers the remaining applications' drain.
bool survivability(double delta_e, std::span<const double> per_app_drain);

struct Sustainability {
  double s1 = 0.0;
  double s2 = 0.0;
  double s_avg = 0.0;
};

// Trapezoidal means of the two gain series over their sampling grid;
// s_avg is their average. Throws on fewer than 2 samples.
Sustainability average_sustainability(std::span<const double> mem_gain_series,
                                      std::span<const double> energy_gain_series);

// Fraction of the horizon the current configuration can sustain:
// min(1, remaining_resource / (per_step_drain * horizon_steps)).
double config_continuity(double remaining_resource, double per_step_drain,
                         int horizon_steps);

struct ContinuityProbabilities {
  double p_time = 1.0;
  double p_config = 1.0;
};

// p_time: mean of the per-step availability ratios recorded so far (1 when no
// record exists yet). p_config: the sustainable-horizon fraction above.
ContinuityProbabilities continuity_probabilities(
    std::span<const double> time_ratio_records, double remaining_resource,
    double per_step_drain, int horizon_steps);

}  // namespace lorafall

#endif  // LORAFALL_METRICS_HPP_
