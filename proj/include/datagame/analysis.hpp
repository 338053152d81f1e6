#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "datagame/map.hpp"

namespace datagame {

struct OrbitSettings {
  long n_transient = 5000;
  long n_keep = 200;
  double divergence_bound = 1e6;
};

template <class State>
struct OrbitResult {
  std::vector<State> samples;       // post-transient states, in orbit order
  bool diverged = false;
  std::optional<long> diverged_at;  // global step index of the offending step
};

template <class State>
bool out_of_bounds(const State& x, double bound) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || std::abs(x[i]) > bound) return true;
  }
  return false;
}

// Iterates the map, discards n_transient states, keeps n_keep. Divergence
// (a non-finite or out-of-bound component) is data, not an error: the result
// is flagged and the samples end just before the offending step.
template <DifferentiableMap M>
OrbitResult<typename M::State> simulate_orbit(const M& map, typename M::State x, const OrbitSettings& s) {
  OrbitResult<typename M::State> out;
  long t = 0;
  for (; t < s.n_transient; ++t) {
    x = map.step(x);
    if (out_of_bounds(x, s.divergence_bound)) {
      out.diverged = true;
      out.diverged_at = t;
      return out;
    }
  }
  out.samples.reserve(static_cast<size_t>(s.n_keep));
  for (long k = 0; k < s.n_keep; ++k, ++t) {
    x = map.step(x);
    if (out_of_bounds(x, s.divergence_bound)) {
      out.diverged = true;
      out.diverged_at = t;
      return out;
    }
    out.samples.push_back(x);
  }
  return out;
}

enum class AttractorKind { FixedPoint, Cycle, Chaotic, Divergent, Unresolved };

std::string class_label(AttractorKind kind, int period);

template <class State>
struct Attractor {
  AttractorKind kind = AttractorKind::Unresolved;
  int period = 0;             // 1 for fixed points, k for k-cycles, else 0
  std::vector<State> points;  // one cycle's worth for periodic kinds, a sample otherwise
  std::optional<double> lle;
};

struct DetectSettings {
  double cycle_tol = 1e-5;
  int max_period = 32;
  double lle_threshold = 0.005;  // LLE above this counts as chaotic
};

// Smallest k <= max_period with ||x[t+k] - x[t]||_inf < cycle_tol across the
// whole tail wins; otherwise the orbit is chaotic when the supplied LLE
// exceeds the threshold, else unresolved.
template <class State>
Attractor<State> detect_attractor(const OrbitResult<State>& orbit, const DetectSettings& s,
                                  std::optional<double> lle = {}) {
  Attractor<State> a;
  a.lle = lle;
  if (orbit.diverged) {
    a.kind = AttractorKind::Divergent;
    return a;
  }
  const auto& xs = orbit.samples;
  const long n = static_cast<long>(xs.size());
  const long kmax = std::min<long>(s.max_period, n - 1);
  for (long k = 1; k <= kmax; ++k) {
    bool periodic = true;
    for (long t = 0; t + k < n; ++t) {
      if ((xs[static_cast<size_t>(t + k)] - xs[static_cast<size_t>(t)]).template lpNorm<Eigen::Infinity>() >=
          s.cycle_tol) {
        periodic = false;
        break;
      }
    }
    if (periodic) {
      a.kind = k == 1 ? AttractorKind::FixedPoint : AttractorKind::Cycle;
      a.period = static_cast<int>(k);
      a.points.assign(xs.end() - k, xs.end());
      return a;
    }
  }
  a.kind = (lle && std::isfinite(*lle) && *lle > s.lle_threshold) ? AttractorKind::Chaotic
                                                                  : AttractorKind::Unresolved;
  const long keep = std::min<long>(n, 64);
  a.points.assign(xs.end() - keep, xs.end());
  return a;
}

struct LleSettings {
  long n_transient = 5000;
  long n_sum = 20000;
  double divergence_bound = 1e6;
};

// Benettin estimate of the largest Lyapunov exponent: one tangent vector is
// propagated through the exact Jacobian along the orbit and renormalized to
// unit length every step; the estimate is the mean log stretch. Returns
// +infinity when the orbit leaves the divergence bound.
template <DifferentiableMap M>
double largest_lyapunov(const M& map, typename M::State x, const LleSettings& s) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (long t = 0; t < s.n_transient; ++t) {
    x = map.step(x);
    if (out_of_bounds(x, s.divergence_bound)) return kInf;
  }
  typename M::State v = x;
  v.setOnes();
  v.normalize();
  double acc = 0.0;
  for (long t = 0; t < s.n_sum; ++t) {
    v = map.jacobian(x) * v;
    const double stretch = v.norm();
    acc += std::log(stretch);
    if (stretch > 0.0) v /= stretch;
    x = map.step(x);
    if (out_of_bounds(x, s.divergence_bound)) return kInf;
  }
  return acc / static_cast<double>(s.n_sum);
}

// ---- game-specific drivers -------------------------------------------------

enum class RateAxis { Alpha1, Alpha2, Alpha3 };

std::string to_string(RateAxis axis);
AdjustmentRates with_axis(const AdjustmentRates& rates, RateAxis axis, double value);

enum class X0Policy { Fixed, Follow };

// Inclusive endpoints: value(i) = lo + i*(hi - lo)/(n - 1).
struct SweepAxis {
  RateAxis which = RateAxis::Alpha1;
  double lo = 0.05;
  double hi = 0.6;
  int n = 1101;
};

struct Bif1dPoint {
  double value;  // swept rate value
  Attractor<Vec3> attractor;
  std::vector<Vec3> samples;  // kept post-transient states
  std::optional<double> lle;
};

struct Bif1dSettings {
  OrbitSettings orbit;
  DetectSettings detect;
  LleSettings lle;
  bool with_lle = true;
  X0Policy policy = X0Policy::Fixed;
};

// One-parameter bifurcation scan. Follow warm-starts each point from the
// previous point's final state (falling back to x0 after divergence).
std::vector<Bif1dPoint> bifurcation_scan_1d(const ModelParams& params, const AdjustmentRates& rates_template,
                                            const SweepAxis& sweep, const StrategyState& x0,
                                            const Bif1dSettings& settings);

// Raster geometry; cells are sampled at their centers,
// value(i) = lo + (i + 0.5)*(hi - lo)/n, and indexed row-major as
// cell = iy*nx + ix.
struct GridAxis {
  double lo = 0.0;
  double hi = 1.0;
  int n = 100;

  double center(int i) const { return lo + (i + 0.5) * (hi - lo) / n; }
};

enum class ScanMode { Period, Lle };

inline constexpr int kDivergentClass = -1;
inline constexpr int kUnresolvedClass = -2;

struct CatalogEntry {
  AttractorKind kind = AttractorKind::Unresolved;
  int period = 0;
  std::vector<Vec3> points;
  std::optional<double> lle;
};

struct Raster {
  GridAxis x;
  GridAxis y;
  std::string x_label;
  std::string y_label;
  ScanMode mode = ScanMode::Period;
  std::vector<int> classes;    // Period payload: catalog id or reserved id
  std::vector<double> values;  // Lle payload: exponent per cell, +inf when divergent
  std::vector<CatalogEntry> catalog;
};

struct ScanSettings {
  OrbitSettings orbit{5000, 64, 1e6};
  DetectSettings detect;
  LleSettings lle;
  double match_tol = 1e-3;  // attractor-identity tolerance for basin catalogs
  int threads = 0;          // 0 = hardware concurrency
};

// Two-rate bifurcation raster. Period mode classifies each cell's attractor
// and groups classes by (kind, period); Lle mode stores the exponent. Cell
// results are pure functions of the cell, so the output is independent of
// the worker count; catalog ids are assigned in a sequential row-major pass.
Raster scan_2d(const ModelParams& params, const AdjustmentRates& rates_template, RateAxis x_axis,
               const GridAxis& gx, RateAxis y_axis, const GridAxis& gy, ScanMode mode, const StrategyState& x0,
               const ScanSettings& settings);

// Basin of attraction over initial prices (p1(0), p2(0)) at fixed s(0).
// Distinct attractors are identified by matching representative point sets
// (cyclic-shift aware for cycles) and catalogued in row-major first-seen
// order; divergent and unresolved cells use the reserved ids.
Raster basin_raster(const ModelParams& params, const AdjustmentRates& rates, const GridAxis& p1_axis,
                    const GridAxis& p2_axis, double s0, const ScanSettings& settings);

struct StabilityVoxel {
  double alpha1;
  double alpha2;
  double alpha3;
  bool stable;
};

// Jury classification of the interior equilibrium on a voxel grid of
// adjustment rates; no orbits are simulated.
std::vector<StabilityVoxel> stability_region_3d(const ModelParams& params, const GridAxis& a1, const GridAxis& a2,
                                                const GridAxis& a3);

struct ControlThresholdResult {
  double kappa_star;
  bool already_stable;
};

// Supremum (to `tol`) of the control gains that make the interior
// equilibrium Jury-stable under rates scaled by kappa. Returns kappa_star = 1
// with already_stable set when no control is needed.
ControlThresholdResult find_control_threshold(const ModelParams& params, const AdjustmentRates& rates,
                                              double tol = 1e-6);

}  // namespace datagame
