#pragma once

// Capacity outage probability table and the LOLP / EENS adequacy indices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gep/load_model.hpp"
#include "gep/wind_model.hpp"

namespace gep {

struct CapacityState {
  double available_mw = 0.0;
  double probability = 0.0;

  bool operator==(const CapacityState&) const = default;
};

/// Grid and truncation policy of an outage table.
///
/// Capacities live on a grid of `capacity_step_mw`. A capacity that is not a
/// grid multiple is split between its two neighbouring grid points so that
/// the expected capacity is preserved. Tail bins below `prune_threshold` are
/// dropped and their mass is accounted in pruned_mass(). When
/// `saturation_mw` is set, all states at or above it are folded into one
/// bin; capacity never decreases under convolution, so those states stay
/// above any load up to that level.
struct TablePolicy {
  double capacity_step_mw = 1.0;
  double prune_threshold = 1e-10;
  std::optional<double> saturation_mw;
};

/// Sparse distribution on grid offsets, used as a convolution kernel.
using GridKernel = std::vector<std::pair<long, double>>;

inline void add_to_kernel(GridKernel& kernel, double capacity_mw, double probability, double step) {
  if (probability <= 0.0) return;
  const double x = capacity_mw / step;
  const double nearest = std::round(x);
  auto put = [&kernel](long offset, double p) {
    for (auto& [o, q] : kernel)
      if (o == offset) {
        q += p;
        return;
      }
    kernel.emplace_back(offset, p);
  };
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
    put(static_cast<long>(nearest), probability);
    return;
  }
  const double lower = std::floor(x);
  const double frac = x - lower;
  put(static_cast<long>(lower), probability * (1.0 - frac));
  put(static_cast<long>(lower) + 1, probability * frac);
}

inline GridKernel two_state_kernel(double capacity_mw, double for_rate, double step) {
  GridKernel k;
  add_to_kernel(k, 0.0, for_rate, step);
  add_to_kernel(k, capacity_mw, 1.0 - for_rate, step);
  std::sort(k.begin(), k.end());
  return k;
}

inline GridKernel multi_state_kernel(std::span<const OutputLevel> levels, double step) {
  GridKernel k;
  for (const auto& l : levels) add_to_kernel(k, l.power_mw, l.probability, step);
  std::sort(k.begin(), k.end());
  return k;
}

class OutageTable {
 public:
  explicit OutageTable(TablePolicy policy = {}) : policy_(policy), probs_{1.0} {
    if (!(policy_.capacity_step_mw > 0.0)) throw InvariantError("outage table: capacity step must be > 0");
    if (policy_.saturation_mw)
      saturation_index_ = static_cast<long>(std::ceil(*policy_.saturation_mw / policy_.capacity_step_mw - 1e-9));
  }

  const TablePolicy& policy() const { return policy_; }
  double step() const { return policy_.capacity_step_mw; }
  double total_capacity_mw() const { return total_capacity_; }
  double pruned_mass() const { return pruned_mass_; }
  int convolutions() const { return convolutions_; }

  /// Number of stored grid bins (zero bins included).
  std::size_t bins() const { return probs_.size(); }

  /// Non-zero states in ascending order of available capacity.
  std::vector<CapacityState> entries() const {
    std::vector<CapacityState> out;
    for (std::size_t k = 0; k < probs_.size(); ++k)
      if (probs_[k] > 0.0) out.push_back({available_at(k), probs_[k]});
    return out;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < probs_.size(); ++k)
      if (probs_[k] > 0.0) fn(available_at(k), probs_[k]);
  }

  double probability_mass() const {
    double s = 0.0;
    for (double p : probs_) s += p;
    return s;
  }

  double expected_available_mw() const {
    double s = 0.0;
    for_each([&s](double c, double p) { s += c * p; });
    return s;
  }

  void add_two_state(double capacity_mw, double for_rate) {
    if (!(capacity_mw > 0.0)) throw InvariantError("outage table: unit capacity must be > 0");
    if (!(for_rate >= 0.0 && for_rate < 1.0)) throw InvariantError("outage table: for_rate must lie in [0, 1)");
    apply(two_state_kernel(capacity_mw, for_rate, step()), capacity_mw);
  }

  void add_multi_state(const FarmOutputModel& farm) {
    apply(multi_state_kernel(farm.levels, step()), farm.levels.back().power_mw);
  }

  /// Convolves with a pre-built grid kernel describing `nameplate_mw` of capacity.
  void apply(const GridKernel& kernel, double nameplate_mw) {
    if (kernel.empty()) return;
    long max_offset = 0;
    for (const auto& [o, p] : kernel) max_offset = std::max(max_offset, o);

    std::vector<double> next(probs_.size() + static_cast<std::size_t>(max_offset), 0.0);
    for (const auto& [o, p] : kernel) {
      double* dst = next.data() + o;
      for (std::size_t k = 0; k < probs_.size(); ++k) dst[k] += probs_[k] * p;
    }
    probs_.swap(next);
    total_capacity_ += nameplate_mw;
    ++convolutions_;
    saturate();
    prune();
  }

  double available_at(std::size_t k) const {
    return static_cast<double>(lo_ + static_cast<long>(k)) * policy_.capacity_step_mw;
  }

 private:
  void saturate() {
    if (!saturation_index_) return;
    const long cut = *saturation_index_ - lo_;
    if (cut < 0) {
      // Whole table is above saturation.
      double mass = 0.0;
      for (double p : probs_) mass += p;
      probs_.assign(1, mass);
      lo_ = *saturation_index_;
      return;
    }
    const auto c = static_cast<std::size_t>(cut);
    if (c + 1 >= probs_.size()) return;
    double mass = 0.0;
    for (std::size_t k = c; k < probs_.size(); ++k) mass += probs_[k];
    probs_.resize(c + 1);
    probs_[c] = mass;
  }

  // Drops tail bins, smallest end first, while the mass dropped by this
  // call stays within the threshold.
  void prune() {
    const double thr = policy_.prune_threshold;
    std::size_t first = 0, last = probs_.size();
    while (first + 1 < last && probs_[first] <= 0.0) ++first;
    while (last > first + 1 && probs_[last - 1] <= 0.0) --last;
    double budget = thr;
    while (last > first + 1) {
      const bool low = probs_[first] <= probs_[last - 1];
      const double p = low ? probs_[first] : probs_[last - 1];
      if (p > budget) break;
      budget -= p;
      pruned_mass_ += p;
      if (low)
        ++first;
      else
        --last;
    }
    if (first > 0 || last < probs_.size()) {
      probs_ = std::vector<double>(probs_.begin() + static_cast<long>(first), probs_.begin() + static_cast<long>(last));
      lo_ += static_cast<long>(first);
    }
  }

  TablePolicy policy_;
  std::optional<long> saturation_index_;
  long lo_ = 0;
  std::vector<double> probs_;
  double total_capacity_ = 0.0;
  double pruned_mass_ = 0.0;
  int convolutions_ = 0;
};

inline OutageTable empty_table(TablePolicy policy = {}) { return OutageTable(policy); }

inline OutageTable convolve_two_state(OutageTable table, double capacity_mw, double for_rate) {
  table.add_two_state(capacity_mw, for_rate);
  return table;
}

inline OutageTable convolve_multi_state(OutageTable table, const FarmOutputModel& farm) {
  table.add_multi_state(farm);
  return table;
}

/// Loss-of-load probability: expected fraction of the year in which demand
/// exceeds available capacity.
inline double lolp(const OutageTable& table, const LoadDurationCurve& ldc) {
  double hours = 0.0;
  table.for_each([&](double available, double p) {
    if (available < ldc.peak()) hours += p * ldc.duration_at(available);
  });
  return hours / ldc.hours();
}

/// Expected energy not supplied, MWh per year.
inline double eens(const OutageTable& table, const LoadDurationCurve& ldc) {
  double energy = 0.0;
  table.for_each([&](double available, double p) {
    if (available < ldc.peak()) energy += p * ldc.energy_between(available, ldc.peak());
  });
  return energy;
}

}  // namespace gep
