#pragma once

// Wind turbine power curve, empirical turbine output model, and the
// forced-outage-aware clustered wind farm model.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gep {

class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PowerCurve {
  double v_cut_in = 0.0;   // m/s
  double v_rated = 0.0;    // m/s
  double v_cut_out = 0.0;  // m/s
  double rated_mw = 0.0;
  // Mid-range output as a fraction of rated_mw: a + b v + c v^2.
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  bool operator==(const PowerCurve&) const = default;
};

struct OutputLevel {
  double power_mw = 0.0;
  double probability = 0.0;

  bool operator==(const OutputLevel&) const = default;
};

struct WindSeries {
  std::vector<double> samples;  // m/s
  double sample_interval_h = 1.0;
};

struct TurbineOutputModel {
  std::vector<OutputLevel> levels;

  bool operator==(const TurbineOutputModel&) const = default;
};

struct FarmOutputModel {
  std::vector<OutputLevel> levels;
  int turbine_count = 1;
  double for_rate = 0.0;

  bool operator==(const FarmOutputModel&) const = default;
};

namespace detail {

inline void check_levels(std::span<const OutputLevel> levels, const char* what) {
  if (levels.empty()) throw InvariantError(std::string(what) + ": no output levels");
  double sum = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k].probability >= 0.0))
      throw InvariantError(std::string(what) + ": negative probability at level " + std::to_string(k));
    if (k > 0 && !(levels[k].power_mw > levels[k - 1].power_mw))
      throw InvariantError(std::string(what) + ": powers must be strictly increasing");
    sum += levels[k].probability;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvariantError(std::string(what) + ": probabilities sum to " + std::to_string(sum));
}

}  // namespace detail

inline void validate(const TurbineOutputModel& model) {
  detail::check_levels(model.levels, "turbine model");
  if (model.levels.front().power_mw != 0.0)
    throw InvariantError("turbine model: lowest level must be 0 MW");
}

inline void validate(const FarmOutputModel& model) {
  detail::check_levels(model.levels, "farm model");
  if (model.turbine_count < 1) throw InvariantError("farm model: turbine_count must be >= 1");
  if (!(model.for_rate >= 0.0 && model.for_rate < 1.0))
    throw InvariantError("farm model: for_rate must lie in [0, 1)");
  if (model.levels.front().power_mw < 0.0) throw InvariantError("farm model: negative power level");
}

/// Fits the quadratic mid-range segment from three conditions: zero output at
/// cut-in, rated output at rated speed, and the cubic law at the midpoint
/// speed (v_cut_in + v_rated) / 2.
inline PowerCurve fit_power_curve(double v_cut_in, double v_rated, double v_cut_out, double rated_mw) {
  if (!(v_cut_in >= 0.0 && v_cut_in < v_rated && v_rated < v_cut_out))
    throw InvariantError("power curve: require 0 <= v_cut_in < v_rated < v_cut_out");
  if (!(rated_mw > 0.0)) throw InvariantError("power curve: rated power must be positive");

  const double mid = 0.5 * (v_cut_in + v_rated);
  Eigen::Matrix3d system;
  system << 1.0, v_cut_in, v_cut_in * v_cut_in,
            1.0, v_rated, v_rated * v_rated,
            1.0, mid, mid * mid;
  const double ratio = mid / v_rated;
  const Eigen::Vector3d rhs(0.0, 1.0, ratio * ratio * ratio);
  const Eigen::Vector3d coef = system.fullPivLu().solve(rhs);

  return PowerCurve{v_cut_in, v_rated, v_cut_out, rated_mw, coef[0], coef[1], coef[2]};
}

/// Turbine output (MW) at wind speed v.
inline double turbine_power(const PowerCurve& curve, double v) {
  if (v < curve.v_cut_in || v >= curve.v_cut_out) return 0.0;
  if (v >= curve.v_rated) return curve.rated_mw;
  const double fraction = curve.a + curve.b * v + curve.c * v * v;
  return curve.rated_mw * std::clamp(fraction, 0.0, 1.0);
}

/// Index of the class a value falls into, given ascending representatives
/// whose class edges sit at the midpoints. A value on an edge belongs to the
/// upper class.
inline std::size_t nearest_class(std::span<const double> representatives, double value) {
  const double scale = std::max(1.0, std::abs(representatives.back()));
  const double eps = 1e-9 * scale;
  std::size_t k = 0;
  while (k + 1 < representatives.size() &&
         value + eps >= 0.5 * (representatives[k] + representatives[k + 1]))
    ++k;
  return k;
}

inline TurbineOutputModel build_turbine_model(const PowerCurve& curve, const WindSeries& series,
                                              int level_count) {
  if (level_count < 2) throw InvariantError("turbine model: need at least 2 levels");
  if (series.samples.empty()) throw InvariantError("turbine model: empty wind series");

  std::vector<double> reps(static_cast<std::size_t>(level_count));
  for (int k = 0; k < level_count; ++k)
    reps[static_cast<std::size_t>(k)] = curve.rated_mw * k / (level_count - 1);

  std::vector<std::size_t> counts(reps.size(), 0);
  for (double v : series.samples) {
    if (v < 0.0) throw InvariantError("wind series: negative wind speed");
    ++counts[nearest_class(reps, turbine_power(curve, v))];
  }

  TurbineOutputModel model;
  const auto total = static_cast<double>(series.samples.size());
  for (std::size_t k = 0; k < reps.size(); ++k)
    model.levels.push_back({reps[k], static_cast<double>(counts[k]) / total});
  return model;
}

/// Probability that exactly i of N turbines are available, i = 0..N.
/// Evaluated as a log-space recurrence so large N does not overflow.
inline std::vector<double> availability_distribution(int turbine_count, double for_rate) {
  if (turbine_count < 1) throw InvariantError("availability: turbine count must be >= 1");
  if (!(for_rate >= 0.0 && for_rate < 1.0)) throw InvariantError("availability: for_rate must lie in [0, 1)");

  const auto n = static_cast<std::size_t>(turbine_count);
  std::vector<double> p(n + 1, 0.0);
  if (for_rate == 0.0) {
    p[n] = 1.0;
    return p;
  }
  const double log_odds = std::log1p(-for_rate) - std::log(for_rate);
  double log_p = turbine_count * std::log(for_rate);
  p[0] = std::exp(log_p);
  for (std::size_t i = 0; i < n; ++i) {
    log_p += std::log(static_cast<double>(n - i) / static_cast<double>(i + 1)) + log_odds;
    p[i + 1] = std::exp(log_p);
  }
  return p;
}

/// Combines N identical turbines, each with the given output model and
/// forced outage rate, into a farm model with the same number of levels.
/// All available turbines see the same wind level; the (N+1) x K joint
/// states are clustered onto representatives N * turbine level.
inline FarmOutputModel aggregate_farm(const TurbineOutputModel& turbine, int turbine_count, double for_rate) {
  validate(turbine);
  const std::vector<double> avail = availability_distribution(turbine_count, for_rate);

  std::vector<double> reps;
  reps.reserve(turbine.levels.size());
  for (const auto& level : turbine.levels) reps.push_back(turbine_count * level.power_mw);

  std::vector<double> probs(reps.size(), 0.0);
  for (std::size_t i = 0; i < avail.size(); ++i) {
    for (const auto& level : turbine.levels) {
      const double capacity = static_cast<double>(i) * level.power_mw;
      probs[nearest_class(reps, capacity)] += avail[i] * level.probability;
    }
  }

  FarmOutputModel farm;
  farm.turbine_count = turbine_count;
  farm.for_rate = for_rate;
  for (std::size_t k = 0; k < reps.size(); ++k) farm.levels.push_back({reps[k], probs[k]});
  return farm;
}

inline double expected_output(std::span<const OutputLevel> levels) {
  return std::accumulate(levels.begin(), levels.end(), 0.0,
                         [](double acc, const OutputLevel& l) { return acc + l.power_mw * l.probability; });
}

inline double expected_output(const FarmOutputModel& model) { return expected_output(model.levels); }

}  // namespace gep
