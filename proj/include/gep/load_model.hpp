#pragma once

// Piecewise-linear annual load duration curve.

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gep/wind_model.hpp"

namespace gep {

/// Interior knee of a two-piece curve, as fractions of hours and of peak.
struct LdcBreakpoint {
  double duration_fraction = 0.5;
  double load_fraction = 0.75;

  bool operator==(const LdcBreakpoint&) const = default;
};

class LoadDurationCurve {
 public:
  struct Vertex {
    double duration_h;
    double load_mw;
  };

  LoadDurationCurve(double peak_mw, double base_mw, double hours, std::optional<LdcBreakpoint> breakpoint = {})
      : peak_(peak_mw), base_(base_mw), hours_(hours), breakpoint_(breakpoint) {
    if (!(base_mw > 0.0 && base_mw <= peak_mw)) throw InvariantError("ldc: require 0 < base <= peak");
    if (!(hours > 0.0)) throw InvariantError("ldc: hours must be positive");
    vertices_.push_back({0.0, peak_mw});
    if (breakpoint) {
      const double d = breakpoint->duration_fraction;
      const double l = breakpoint->load_fraction * peak_mw;
      if (!(d > 0.0 && d < 1.0 && l > base_mw && l < peak_mw))
        throw InvariantError("ldc: breakpoint must lie strictly inside the curve");
      vertices_.push_back({d * hours, l});
    }
    vertices_.push_back({hours, base_mw});
  }

  double peak() const { return peak_; }
  double base() const { return base_; }
  double hours() const { return hours_; }
  const std::optional<LdcBreakpoint>& breakpoint() const { return breakpoint_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  /// Hours per year during which demand exceeds `load`.
  double duration_at(double load) const {
    if (load >= peak_) return 0.0;
    if (load < base_) return hours_;
    for (std::size_t k = 0; k + 1 < vertices_.size(); ++k) {
      const Vertex& hi = vertices_[k];
      const Vertex& lo = vertices_[k + 1];
      if (load >= lo.load_mw) {
        const double span = hi.load_mw - lo.load_mw;
        if (span <= 0.0) return lo.duration_h;
        return hi.duration_h + (hi.load_mw - load) / span * (lo.duration_h - hi.duration_h);
      }
    }
    return hours_;
  }

  /// Energy (MWh per year) of the demand lying in the band [l1, l2],
  /// i.e. the integral of duration_at over that band. Exact per linear piece.
  double energy_between(double l1, double l2) const {
    l1 = std::max(l1, 0.0);
    l2 = std::min(l2, peak_);
    if (!(l2 > l1)) return 0.0;

    double energy = 0.0;
    // Flat part below the base load.
    if (l1 < base_) energy += (std::min(l2, base_) - l1) * hours_;
    for (std::size_t k = 0; k + 1 < vertices_.size(); ++k) {
      const double top = vertices_[k].load_mw;
      const double bottom = vertices_[k + 1].load_mw;
      const double a = std::max(l1, bottom);
      const double b = std::min(l2, top);
      if (b > a) energy += (b - a) * 0.5 * (duration_at(a) + duration_at(b));
    }
    return energy;
  }

  double total_energy() const { return energy_between(0.0, peak_); }

  bool operator==(const LoadDurationCurve& o) const {
    return peak_ == o.peak_ && base_ == o.base_ && hours_ == o.hours_ && breakpoint_ == o.breakpoint_;
  }

 private:
  double peak_;
  double base_;
  double hours_;
  std::optional<LdcBreakpoint> breakpoint_;
  std::vector<Vertex> vertices_;
};

inline LoadDurationCurve build_ldc(double peak_mw, double base_ratio, double hours,
                                   std::optional<LdcBreakpoint> breakpoint = {}) {
  if (!(base_ratio > 0.0 && base_ratio <= 1.0)) throw InvariantError("ldc: base ratio must lie in (0, 1]");
  return LoadDurationCurve(peak_mw, base_ratio * peak_mw, hours, breakpoint);
}

}  // namespace gep
