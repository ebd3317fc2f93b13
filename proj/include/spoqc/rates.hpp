#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "spoqc/rng.hpp"

namespace spoqc {

// Sentinel for an unbounded trial budget; kept distinct from any large
// integer so the analytic k -> infinity limits are used instead.
inline constexpr std::int64_t kUnboundedTrials = -1;

// Physical parameters of one repeat-until-success gate.
struct RusParams {
  double eta_a = 1.0;              // end-to-end transmission, emitter a
  double eta_b = 1.0;              // end-to-end transmission, emitter b
  std::int64_t max_trials = 1;     // k, or kUnboundedTrials
  int photons_per_trial = 1;       // n; n = 1 is the standard RUS gate
  double distinguishability = 0.0; // D = 1 - M
  double t_trial_over_t2 = 0.0;

  void validate() const {
    for (double eta : {eta_a, eta_b})
      if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("RusParams: transmission outside [0, 1]");
    if (max_trials != kUnboundedTrials && max_trials < 1)
      throw std::domain_error("RusParams: max_trials must be >= 1 or unbounded");
    if (photons_per_trial < 1)
      throw std::domain_error("RusParams: photons_per_trial must be >= 1");
    if (!(distinguishability >= 0.0 && distinguishability <= 1.0))
      throw std::domain_error("RusParams: distinguishability outside [0, 1]");
    if (!(t_trial_over_t2 >= 0.0))
      throw std::domain_error("RusParams: t_trial_over_t2 must be >= 0");
  }
};

// Per-trial outcome distribution.
struct TrialRates {
  double success;  // p_s
  double repeat;   // p_r
  double failure;  // p_f
};

inline void check_eta(double eta_a, double eta_b) {
  for (double eta : {eta_a, eta_b})
    if (!(eta >= 0.0 && eta <= 1.0))
      throw std::domain_error("transmission outside [0, 1]");
}

// Standard RUS trial: p_s = p_r = eta_a*eta_b/2, p_f = 1 - eta_a*eta_b.
inline TrialRates trial_rates(double eta_a, double eta_b) {
  check_eta(eta_a, eta_b);
  const double t = eta_a * eta_b;
  return {t / 2.0, t / 2.0, 1.0 - t};
}

// Integer power by repeated multiplication; exact for exponent 1 so that
// the n = 1 hybrid gate reduces bit-for-bit to the standard gate.
inline double pow_int(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

// Hybrid RUS trial with n photons per trial: success needs every photon
// detected and at least one success pattern; losing any photon fails the
// trial; an all-repeat pattern sequence repeats it.
inline TrialRates hrus_trial_rates(double eta_a, double eta_b, int n) {
  check_eta(eta_a, eta_b);
  if (n < 1) throw std::domain_error("hrus_trial_rates: n must be >= 1");
  const double all_detected = pow_int(eta_a * eta_b, n);
  const double half_pow = std::ldexp(1.0, -n);  // 2^-n
  return {(1.0 - half_pow) * all_detected, half_pow * all_detected,
          1.0 - all_detected};
}

struct GateRates {
  double success;
  double failure;
  double abort;
};

// Total outcome rates after up to k trials (geometric sums over the repeat
// branch). Unbounded k uses the analytic limits.
inline GateRates hrus_rates(double eta_a, double eta_b, std::int64_t k, int n) {
  if (k != kUnboundedTrials && k < 1)
    throw std::domain_error("hrus_rates: k must be >= 1 or unbounded");
  const TrialRates t = hrus_trial_rates(eta_a, eta_b, n);
  if (k == kUnboundedTrials) {
    if (t.repeat >= 1.0) return {0.0, 0.0, 1.0};  // unreachable: p_r <= 1/2
    return {t.success / (1.0 - t.repeat), t.failure / (1.0 - t.repeat), 0.0};
  }
  double series;  // sum_{j<k} p_r^j
  if (t.repeat == 0.0) {
    series = 1.0;
  } else {
    series = (1.0 - std::pow(t.repeat, static_cast<double>(k))) / (1.0 - t.repeat);
  }
  const double success = t.success * series;
  const double failure = t.failure * series;
  return {success, failure, std::max(0.0, 1.0 - success - failure)};
}

inline GateRates rus_rates(double eta_a, double eta_b, std::int64_t k) {
  return hrus_rates(eta_a, eta_b, k, 1);
}

inline double rus_success_prob(double eta_a, double eta_b, std::int64_t k) {
  return rus_rates(eta_a, eta_b, k).success;
}
inline double rus_failure_prob(double eta_a, double eta_b, std::int64_t k) {
  return rus_rates(eta_a, eta_b, k).failure;
}
inline double rus_abort_prob(double eta_a, double eta_b, std::int64_t k) {
  return rus_rates(eta_a, eta_b, k).abort;
}

enum class OutcomeKind : std::uint8_t { Success, Failure, Abort };

struct GateOutcome {
  OutcomeKind kind;
  std::int64_t trials_used;  // Abort implies trials_used == k
};

// Samples the trial process literally: draw per-trial outcomes until the
// gate terminates or the budget runs out.
inline GateOutcome sample_gate_outcome(const RusParams& params, Rng& rng) {
  params.validate();
  const TrialRates t =
      hrus_trial_rates(params.eta_a, params.eta_b, params.photons_per_trial);
  std::int64_t trial = 0;
  while (true) {
    ++trial;
    const double u = rng.uniform();
    if (u < t.success) return {OutcomeKind::Success, trial};
    if (u < t.success + t.failure) return {OutcomeKind::Failure, trial};
    if (params.max_trials != kUnboundedTrials && trial == params.max_trials)
      return {OutcomeKind::Abort, trial};
  }
}

}  // namespace spoqc
