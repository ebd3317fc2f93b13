#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "spoqc/matching.hpp"
#include "spoqc/rates.hpp"

namespace spoqc {

enum class SweepAxis : std::uint8_t {
  GateFailure,       // p_F directly
  RusTimeOverT2,     // t_RUS / T2
  Distinguishability,
  Loss,              // single-photon loss; mapped to p_F via the gate rates
  CombinedScale,     // w: scales the full base noise triple
};

inline const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::GateFailure: return "p_F";
    case SweepAxis::RusTimeOverT2: return "t_rus_over_t2";
    case SweepAxis::Distinguishability: return "D";
    case SweepAxis::Loss: return "loss";
    case SweepAxis::CombinedScale: return "w";
  }
  return "?";
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::GateFailure;
  std::vector<double> values;   // ascending
  std::vector<int> distances;   // odd, >= 3; rounds = d
  std::int64_t shots_per_point = 100000;
  std::uint64_t master_seed = 1;
  Basis basis = Basis::X;
  CircuitNoise base;            // fixed other-axis settings
  std::int64_t trial_budget = 20;  // k for the Loss axis mapping
  int photons_per_trial = 1;       // n for the Loss axis mapping
  int workers = 0;
  int bootstrap_samples = 200;

  void validate() const {
    if (values.empty())
      throw std::invalid_argument("SweepSpec: no sweep values");
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i] <= values[i - 1])
        throw std::invalid_argument("SweepSpec: values must be ascending");
    if (distances.size() < 2)
      throw std::invalid_argument("SweepSpec: need at least two distances");
    for (int d : distances)
      if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("SweepSpec: distances must be odd and >= 3");
    if (shots_per_point < 1)
      throw std::invalid_argument("SweepSpec: shots_per_point must be >= 1");
  }
};

inline CircuitNoise noise_for_axis_value(const SweepSpec& spec, double value) {
  CircuitNoise noise = spec.base;
  switch (spec.axis) {
    case SweepAxis::GateFailure:
      noise.gate_failure_prob = value;
      break;
    case SweepAxis::RusTimeOverT2:
      noise.t_rus_over_t2 = value;
      break;
    case SweepAxis::Distinguishability:
      noise.distinguishability = value;
      break;
    case SweepAxis::Loss: {
      const double eta = 1.0 - value;
      noise.gate_failure_prob =
          1.0 - hrus_rates(eta, eta, spec.trial_budget, spec.photons_per_trial)
                    .success;
      break;
    }
    case SweepAxis::CombinedScale:
      noise.gate_failure_prob = value * spec.base.gate_failure_prob;
      noise.t_rus_over_t2 = value * spec.base.t_rus_over_t2;
      noise.distinguishability = value * spec.base.distinguishability;
      break;
  }
  return noise;
}

struct CurvePoint {
  double axis_value;
  int distance;
  std::int64_t shots;
  std::int64_t errors;
  double p_l;
  double std_error;
};

struct PairCrossing {
  int distance_low = 0;
  int distance_high = 0;
  bool found = false;
  double crossing = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct ThresholdEstimate {
  bool found = false;
  double crossing = 0.0;  // unweighted mean over found pairs
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::vector<PairCrossing> pairs;
};

namespace detail {

// One logical-error curve over the sweep grid.
struct Curve {
  std::vector<double> x;
  std::vector<double> p;       // clamped away from 0 for log fits
  std::vector<double> sigma;   // binomial standard errors
  std::int64_t shots = 0;
};

inline double clamped_rate(double errors, double shots) {
  return std::max(errors, 0.5) / shots;
}

// Weighted least-squares line through (x, log p).
struct LogLine {
  double intercept;
  double slope;
};

inline LogLine fit_log_line(const Curve& c, int begin, int end) {
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (int i = begin; i < end; ++i) {
    const double y = std::log(c.p[static_cast<std::size_t>(i)]);
    const double sigma_log =
        std::max(c.sigma[static_cast<std::size_t>(i)] / c.p[static_cast<std::size_t>(i)], 1e-6);
    const double w = 1.0 / (sigma_log * sigma_log);
    const double x = c.x[static_cast<std::size_t>(i)];
    sw += w;
    swx += w * x;
    swy += w * y;
    swxx += w * x * x;
    swxy += w * x * y;
  }
  const double denom = sw * swxx - swx * swx;
  if (std::abs(denom) < 1e-30) return {swy / std::max(sw, 1e-30), 0.0};
  const double slope = (sw * swxy - swx * swy) / denom;
  const double intercept = (swy - slope * swx) / sw;
  return {intercept, slope};
}

// Crossing of two curves: bracket by the sign change of log p_high - log
// p_low, then intersect local log-linear fits over a window around the
// bracket. Falls back to linear interpolation of the log difference when
// the fitted lines intersect far from the bracket.
inline std::optional<double> curve_crossing(const Curve& low, const Curve& high) {
  const int n = static_cast<int>(low.x.size());
  int bracket = -1;
  for (int i = 0; i + 1 < n; ++i) {
    const double di = std::log(high.p[static_cast<std::size_t>(i)]) -
                      std::log(low.p[static_cast<std::size_t>(i)]);
    const double dj = std::log(high.p[static_cast<std::size_t>(i) + 1]) -
                      std::log(low.p[static_cast<std::size_t>(i) + 1]);
    if (di <= 0.0 && dj > 0.0) {
      bracket = i;
      break;
    }
  }
  if (bracket < 0) return std::nullopt;

  const int begin = std::max(0, bracket - 1);
  const int end = std::min(n, bracket + 3);
  const LogLine a = fit_log_line(low, begin, end);
  const LogLine b = fit_log_line(high, begin, end);
  const double x_lo = low.x[static_cast<std::size_t>(bracket)];
  const double x_hi = low.x[static_cast<std::size_t>(bracket) + 1];
  if (std::abs(b.slope - a.slope) > 1e-30) {
    const double x = (a.intercept - b.intercept) / (b.slope - a.slope);
    const double pad = x_hi - x_lo;
    if (x >= x_lo - pad && x <= x_hi + pad) return x;
  }
  const double di = std::log(high.p[static_cast<std::size_t>(bracket)]) -
                    std::log(low.p[static_cast<std::size_t>(bracket)]);
  const double dj = std::log(high.p[static_cast<std::size_t>(bracket) + 1]) -
                    std::log(low.p[static_cast<std::size_t>(bracket) + 1]);
  return x_lo + (x_hi - x_lo) * (-di) / (dj - di);
}

inline double normal_draw(Rng& rng) {
  // Box-Muller; the tiny clamp keeps log finite.
  const double u1 = std::max(rng.uniform(), 1e-12);
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Bootstrap replicate of a curve: binomial resampling via the normal
// approximation (shots are large in every use).
inline Curve resample(const Curve& c, Rng& rng) {
  Curve out = c;
  for (std::size_t i = 0; i < c.p.size(); ++i) {
    const double mean = c.p[i] * static_cast<double>(c.shots);
    const double sd = std::sqrt(std::max(
        c.p[i] * (1.0 - c.p[i]) * static_cast<double>(c.shots), 0.25));
    const double k = std::max(0.5, std::round(mean + sd * normal_draw(rng)));
    out.p[i] = k / static_cast<double>(c.shots);
    out.sigma[i] = std::sqrt(out.p[i] * (1.0 - out.p[i]) /
                             static_cast<double>(c.shots));
  }
  return out;
}

}  // namespace detail

// Crossing of a (d, d+2) curve pair with a percentile-bootstrap confidence
// interval. Exposed separately so synthetic fixtures can exercise it.
inline PairCrossing estimate_pair_crossing(const detail::Curve& low,
                                           const detail::Curve& high,
                                           int distance_low, int distance_high,
                                           std::uint64_t seed,
                                           int bootstrap_samples) {
  PairCrossing out;
  out.distance_low = distance_low;
  out.distance_high = distance_high;
  const auto point = detail::curve_crossing(low, high);
  if (!point) return out;
  out.found = true;
  out.crossing = *point;

  Rng rng(absorb_stream(seed, 0xB5007'57A9ULL));
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(bootstrap_samples));
  for (int b = 0; b < bootstrap_samples; ++b) {
    const auto rl = detail::resample(low, rng);
    const auto rh = detail::resample(high, rng);
    const auto x = detail::curve_crossing(rl, rh);
    if (x) samples.push_back(*x);
  }
  if (samples.size() < 8) {
    out.ci_low = out.ci_high = out.crossing;
    return out;
  }
  std::sort(samples.begin(), samples.end());
  const auto quantile = [&](double q) {
    const double pos = q * (static_cast<double>(samples.size()) - 1.0);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= samples.size()) return samples.back();
    return samples[i] * (1.0 - frac) + samples[i + 1] * frac;
  };
  out.ci_low = quantile(0.025);
  out.ci_high = quantile(0.975);
  return out;
}

struct ThresholdScanResult {
  std::vector<CurvePoint> curves;  // distance-major, then sweep order
  ThresholdEstimate estimate;
};

// Logical-error curves over the sweep grid for every distance, plus the
// crossing estimate pooled over consecutive-distance pairs (unweighted
// mean; equal weights avoid favoring the most finite-size-biased pair).
inline ThresholdScanResult threshold_scan(const SweepSpec& spec) {
  spec.validate();
  ThresholdScanResult result;
  std::vector<detail::Curve> curves(spec.distances.size());

  for (std::size_t di = 0; di < spec.distances.size(); ++di) {
    const int d = spec.distances[di];
    detail::Curve& curve = curves[di];
    curve.shots = spec.shots_per_point;
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
      const double value = spec.values[vi];
      const CircuitNoise noise = noise_for_axis_value(spec, value);
      const auto circuit = build_memory_experiment(d, spec.basis, d, noise);
      const std::uint64_t point_seed = absorb_stream(
          spec.master_seed,
          static_cast<std::uint64_t>(di) * 0x10001ULL + vi + 1);
      const auto rate = logical_error_rate(circuit, spec.shots_per_point,
                                           point_seed, {.workers = spec.workers});
      result.curves.push_back({value, d, rate.shots, rate.errors, rate.estimate,
                               rate.std_error});
      curve.x.push_back(value);
      curve.p.push_back(
          detail::clamped_rate(static_cast<double>(rate.errors),
                               static_cast<double>(rate.shots)));
      curve.sigma.push_back(std::sqrt(
          curve.p.back() * (1.0 - curve.p.back()) /
          static_cast<double>(rate.shots)));
    }
  }

  ThresholdEstimate& estimate = result.estimate;
  double sum = 0.0, sum_lo = 0.0, sum_hi = 0.0;
  int found = 0;
  for (std::size_t di = 0; di + 1 < spec.distances.size(); ++di) {
    const auto pair = estimate_pair_crossing(
        curves[di], curves[di + 1], spec.distances[di], spec.distances[di + 1],
        absorb_stream(spec.master_seed, 0xCC + di), spec.bootstrap_samples);
    estimate.pairs.push_back(pair);
    if (pair.found) {
      ++found;
      sum += pair.crossing;
      sum_lo += pair.ci_low;
      sum_hi += pair.ci_high;
    }
  }
  if (found > 0) {
    estimate.found = true;
    estimate.crossing = sum / found;
    estimate.ci_low = sum_lo / found;
    estimate.ci_high = sum_hi / found;
  }
  return result;
}

// --- Fault-tolerant surface --------------------------------------------

struct FtSurfaceSpec {
  double axis_gate_failure = 0.0;  // A: p_F threshold
  double axis_time = 0.0;          // B: t threshold
  double axis_distinguishability = 0.0;  // C: D threshold
  int tessellation_points = 120;
  double w_min = 0.85;
  double w_max = 1.0;
  int w_values = 7;  // plus one refinement point
  std::vector<int> distances{3, 5};
  std::int64_t shots_per_point = 50000;
  std::uint64_t master_seed = 1;
  int workers = 0;

  void validate() const {
    if (!(axis_gate_failure > 0.0) || !(axis_time > 0.0) ||
        !(axis_distinguishability > 0.0))
      throw std::invalid_argument("FtSurfaceSpec: axis thresholds must be positive");
    if (tessellation_points < 3)
      throw std::invalid_argument("FtSurfaceSpec: need at least 3 points");
    if (!(0.0 < w_min && w_min < w_max))
      throw std::invalid_argument("FtSurfaceSpec: bad w range");
  }
};

struct FtSurfacePoint {
  double direction[3];  // M on the plane x/A + y/B + z/C = 1
  bool found = false;
  bool at_range_edge = false;
  double w_th = 0.0;
  double point[3];  // w_th * M
};

struct FtSurface {
  std::vector<FtSurfacePoint> points;
};

// Barycentric tessellation of the plane triangle through the three axis
// thresholds, n_p = rows(rows+1)/2 points including the corners.
inline std::vector<std::array<double, 3>> plane_tessellation(int n_p) {
  int rows = 2;
  while (rows * (rows + 1) / 2 < n_p) ++rows;
  std::vector<std::array<double, 3>> points;
  for (int i = 0; i < rows && static_cast<int>(points.size()) < n_p; ++i)
    for (int j = 0; j + i < rows && static_cast<int>(points.size()) < n_p; ++j) {
      const double denom = static_cast<double>(rows - 1);
      const double u = static_cast<double>(i) / denom;
      const double v = static_cast<double>(j) / denom;
      points.push_back({u, v, 1.0 - u - v});
    }
  return points;
}

inline FtSurface ft_surface(const FtSurfaceSpec& spec) {
  spec.validate();
  FtSurface surface;
  const auto barycentric = plane_tessellation(spec.tessellation_points);

  for (std::size_t pi = 0; pi < barycentric.size(); ++pi) {
    const auto& bc = barycentric[pi];
    FtSurfacePoint point;
    point.direction[0] = bc[0] * spec.axis_gate_failure;
    point.direction[1] = bc[1] * spec.axis_time;
    point.direction[2] = bc[2] * spec.axis_distinguishability;

    SweepSpec sweep;
    sweep.axis = SweepAxis::CombinedScale;
    sweep.distances = spec.distances;
    sweep.shots_per_point = spec.shots_per_point;
    sweep.master_seed = absorb_stream(spec.master_seed, 0xF7 + pi);
    sweep.workers = spec.workers;
    sweep.base.gate_failure_prob = point.direction[0];
    sweep.base.t_rus_over_t2 = point.direction[1];
    sweep.base.distinguishability = point.direction[2];
    for (int i = 0; i < spec.w_values; ++i)
      sweep.values.push_back(spec.w_min + (spec.w_max - spec.w_min) * i /
                                              (spec.w_values - 1));

    auto scan = threshold_scan(sweep);
    if (scan.estimate.found) {
      // One refinement pass: insert a grid point at the first estimate.
      const double w0 = scan.estimate.crossing;
      if (w0 > spec.w_min && w0 < spec.w_max) {
        auto values = sweep.values;
        values.push_back(w0);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end(),
                                 [](double a, double b) {
                                   return std::abs(a - b) < 1e-9;
                                 }),
                     values.end());
        sweep.values = values;
        scan = threshold_scan(sweep);
      }
    }
    if (scan.estimate.found) {
      point.found = true;
      point.w_th = scan.estimate.crossing;
      const double step =
          (spec.w_max - spec.w_min) / static_cast<double>(spec.w_values - 1);
      point.at_range_edge = point.w_th <= spec.w_min + 0.5 * step ||
                            point.w_th >= spec.w_max - 0.5 * step;
      for (int a = 0; a < 3; ++a) point.point[a] = point.w_th * point.direction[a];
    }
    surface.points.push_back(point);
  }
  return surface;
}

// --- Correctable-border interpolation and trade-off curves ---------------

// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of t_th as a
// function of p_F; clipped to be nonincreasing, zero beyond its root.
class Border {
 public:
  Border(std::vector<double> gate_failure, std::vector<double> t_threshold) {
    if (gate_failure.size() != t_threshold.size() || gate_failure.size() < 2)
      throw std::invalid_argument("Border: need matching lists of >= 2 points");
    std::vector<std::size_t> order(gate_failure.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return gate_failure[a] < gate_failure[b];
    });
    for (std::size_t i : order) {
      x_.push_back(gate_failure[i]);
      y_.push_back(std::max(0.0, t_threshold[i]));
    }
    // Enforce a nonincreasing border.
    for (std::size_t i = 1; i < y_.size(); ++i) y_[i] = std::min(y_[i], y_[i - 1]);
    build_slopes();
  }

  double operator()(double p_f) const {
    if (p_f <= x_.front()) return y_.front();
    if (p_f >= x_.back()) return y_.back();
    std::size_t hi = 1;
    while (x_[hi] < p_f) ++hi;
    const std::size_t lo = hi - 1;
    const double h = x_[hi] - x_[lo];
    const double s = (p_f - x_[lo]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return std::max(0.0, h00 * y_[lo] + h10 * h * m_[lo] + h01 * y_[hi] +
                             h11 * h * m_[hi]);
  }

  // Largest p_F with a positive border value.
  double root() const {
    if (y_.back() > 0.0) return x_.back();
    double lo = x_.front(), hi = x_.back();
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((*this)(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  void build_slopes() {
    const std::size_t n = x_.size();
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    m_.assign(n, 0.0);
    m_[0] = delta[0];
    m_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        // Harmonic mean keeps the interpolant monotone.
        m_[i] = 2.0 * delta[i - 1] * delta[i] / (delta[i - 1] + delta[i]);
      }
    }
    // Fritsch-Carlson limiter on the end slopes.
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (delta[i] == 0.0) {
        m_[i] = m_[i + 1] = 0.0;
      } else {
        const double a = m_[i] / delta[i];
        const double b = m_[i + 1] / delta[i];
        const double r = a * a + b * b;
        if (r > 9.0) {
          const double tau = 3.0 / std::sqrt(r);
          m_[i] = tau * a * delta[i];
          m_[i + 1] = tau * b * delta[i];
        }
      }
    }
  }

  std::vector<double> x_, y_, m_;
};

struct TradeoffPoint {
  double loss;
  double t_trial_max;
};

struct TradeoffCurve {
  std::vector<int> k_values;
  std::vector<int> n_values;  // {1} for the plain gate
  // curves[i] corresponds to k_values[i] (plain) or n_values[i]
  // (hybrid, each already optimized over k).
  std::vector<std::vector<TradeoffPoint>> curves;
  std::vector<TradeoffPoint> envelope;
};

inline double max_trial_time(const Border& border, double loss, std::int64_t k,
                             int n) {
  const double eta = 1.0 - loss;
  const double p_f = 1.0 - hrus_rates(eta, eta, k, n).success;
  if (p_f >= border.root()) return 0.0;
  return border(p_f) / static_cast<double>(k);
}

// Fault-tolerant region in (loss, t_trial/T2) per trial budget k, plus the
// pointwise-max envelope.
inline TradeoffCurve loss_coherence_tradeoff(const std::vector<int>& k_values,
                                             const std::vector<double>& loss_grid,
                                             const Border& border) {
  TradeoffCurve out;
  out.k_values = k_values;
  out.n_values = {1};
  for (int k : k_values) {
    std::vector<TradeoffPoint> curve;
    for (double loss : loss_grid)
      curve.push_back({loss, max_trial_time(border, loss, k, 1)});
    out.curves.push_back(std::move(curve));
  }
  for (std::size_t i = 0; i < loss_grid.size(); ++i) {
    double best = 0.0;
    for (const auto& curve : out.curves) best = std::max(best, curve[i].t_trial_max);
    out.envelope.push_back({loss_grid[i], best});
  }
  return out;
}

// Hybrid gate variant: one curve per photons-per-trial n, each optimized
// over the trial budgets; a trial takes the same time regardless of n.
inline TradeoffCurve hrus_tradeoff(const std::vector<int>& n_values,
                                   const std::vector<int>& k_values,
                                   const std::vector<double>& loss_grid,
                                   const Border& border) {
  TradeoffCurve out;
  out.k_values = k_values;
  out.n_values = n_values;
  for (int n : n_values) {
    std::vector<TradeoffPoint> curve;
    for (double loss : loss_grid) {
      double best = 0.0;
      for (int k : k_values)
        best = std::max(best, max_trial_time(border, loss, k, n));
      curve.push_back({loss, best});
    }
    out.curves.push_back(std::move(curve));
  }
  for (std::size_t i = 0; i < loss_grid.size(); ++i) {
    double best = 0.0;
    for (const auto& curve : out.curves) best = std::max(best, curve[i].t_trial_max);
    out.envelope.push_back({loss_grid[i], best});
  }
  return out;
}

// Largest tolerable loss across the k grid (the envelope's loss intercept).
inline double envelope_loss_intercept(const std::vector<int>& k_values,
                                      const Border& border, int n = 1) {
  const double root = border.root();
  double best = 0.0;
  for (int k : k_values) {
    double lo = 0.0, hi = 1.0;
    if (1.0 - hrus_rates(1.0, 1.0, k, n).success >= root) continue;  // FT impossible
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double p_f = 1.0 - hrus_rates(1.0 - mid, 1.0 - mid, k, n).success;
      if (p_f < root)
        lo = mid;
      else
        hi = mid;
    }
    best = std::max(best, 0.5 * (lo + hi));
  }
  return best;
}

// --- Output ---------------------------------------------------------------

inline void write_curves_csv(std::ostream& out,
                             const std::vector<CurvePoint>& curves) {
  out << "axis_value,distance,shots,logical_errors,p_L,stderr\n";
  for (const auto& p : curves)
    out << p.axis_value << "," << p.distance << "," << p.shots << ","
        << p.errors << "," << p.p_l << "," << p.std_error << "\n";
}

inline nlohmann::json threshold_summary_json(const SweepSpec& spec,
                                             const ThresholdScanResult& result) {
  nlohmann::json j;
  j["axis"] = sweep_axis_name(spec.axis);
  j["distances"] = spec.distances;
  j["shots_per_point"] = spec.shots_per_point;
  j["seed"] = spec.master_seed;
  j["basis"] = std::string(1, basis_char(spec.basis));
  j["values"] = spec.values;
  j["estimate"] = {{"found", result.estimate.found},
                   {"crossing", result.estimate.crossing},
                   {"ci_low", result.estimate.ci_low},
                   {"ci_high", result.estimate.ci_high}};
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : result.estimate.pairs)
    j["pairs"].push_back({{"d_low", p.distance_low},
                          {"d_high", p.distance_high},
                          {"found", p.found},
                          {"crossing", p.crossing},
                          {"ci_low", p.ci_low},
                          {"ci_high", p.ci_high}});
  return j;
}

}  // namespace spoqc
