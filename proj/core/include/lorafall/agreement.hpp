#ifndef LORAFALL_AGREEMENT_HPP_
#define LORAFALL_AGREEMENT_HPP_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorafall {

// Continue is decided within a tie tolerance; derived floating-point values
// never land on exact zero.
inline constexpr double kTieTolerance = 1e-9;

enum class AgreementLabel { Reset, Continue, Expand };

struct AgreementDecision {
  double value = 0.0;
  AgreementLabel label = AgreementLabel::Continue;
};

struct AgreementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

AgreementLabel classify(double value);
std::string to_string(AgreementLabel label);

// Pool feasibility: the pool's total demand fits the network-wide headroom
// and every single application fits the server's free memory.
bool memory_feasible(std::span<const int> app_mem_mb, int server_free_mb,
                     long long network_available_mb);

// Mean of per-step required/available ratios; callers clamp ratios to [0,1].
// Throws `empty_horizon` on an empty series.
double memory_availability_probability(std::span<const double> ratios);

// Sum of one server's per-step memory surplus.
double per_server_memory_gain(std::span<const double> surplus);

// Double sum over a servers x applications gain matrix.
double network_memory_gain(const std::vector<std::vector<double>>& gains);

// q_t * sum(surplus): the expected surplus realised over the whole horizon.
double expected_memory_gain(double q_t, std::span<const double> per_app_surplus);

// value = q_t * delta_alpha_x - sum(tail_terms); labelled by sign.
AgreementDecision memory_decision(double q_t, double delta_alpha_x,
                                  std::span<const double> tail_terms);

struct PowerDuration {
  double power_draw;      // J/s
  double active_seconds;  // s
};

// Sum of P_C * t over applications.
double energy_consumed(std::span<const PowerDuration> apps);

// consumed_delta <= e0 * exp(-kappa * elapsed)
bool degradation_ok(double consumed_delta, double e0, double kappa, double elapsed);

// Tail mass of a probability series beyond the boundary index.
// boundary >= last index yields 0 (empty tail).
double q_tail_probability(std::span<const double> p_series, int boundary);

// Non-strict: sum <= delta_e. Strict reads "much less than" as
// sum <= strictness_factor * delta_e.
bool energy_requirement_ok(std::span<const double> required_per_step,
                           double delta_e, bool strict,
                           double strictness_factor = 0.5);

// q_e * delta_e
double expected_energy_gain(double q_e, double delta_e);

// value = q_e * (delta_e_x - delta_e); labelled by sign.
AgreementDecision energy_decision(double q_e, double delta_e_x, double delta_e);

}  // namespace lorafall

#endif  // LORAFALL_AGREEMENT_HPP_
