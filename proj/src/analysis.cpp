#include "datagame/analysis.hpp"

#include <atomic>
#include <functional>
#include <thread>

namespace datagame {

std::string class_label(AttractorKind kind, int period) {
  switch (kind) {
    case AttractorKind::FixedPoint: return "fixed_point";
    case AttractorKind::Cycle: return "cycle(" + std::to_string(period) + ")";
    case AttractorKind::Chaotic: return "chaotic";
    case AttractorKind::Divergent: return "divergent";
    case AttractorKind::Unresolved: return "unresolved";
  }
  return "?";
}

std::string to_string(RateAxis axis) {
  switch (axis) {
    case RateAxis::Alpha1: return "alpha1";
    case RateAxis::Alpha2: return "alpha2";
    case RateAxis::Alpha3: return "alpha3";
  }
  return "?";
}

AdjustmentRates with_axis(const AdjustmentRates& rates, RateAxis axis, double value) {
  AdjustmentRates out = rates;
  switch (axis) {
    case RateAxis::Alpha1: out.alpha1 = value; break;
    case RateAxis::Alpha2: out.alpha2 = value; break;
    case RateAxis::Alpha3: out.alpha3 = value; break;
  }
  return out;
}

namespace {

double sweep_value(const SweepAxis& sweep, int i) {
  return sweep.lo + (sweep.hi - sweep.lo) * static_cast<double>(i) / static_cast<double>(sweep.n - 1);
}

// Runs `job(cell)` for every cell index. Each job writes only its own slot,
// so the results do not depend on how cells are distributed over workers.
void parallel_cells(long n_cells, int threads, const std::function<void(long)>& job) {
  int n_workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::clamp(n_workers, 1, 64);
  if (n_workers == 1 || n_cells < 2) {
    for (long i = 0; i < n_cells; ++i) job(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (long i; (i = next.fetch_add(1, std::memory_order_relaxed)) < n_cells;) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Orbit + classification for one parameter/initial-condition combination,
// computing the LLE only when the period search fails (chaos vs unresolved).
Attractor<Vec3> classify_cell(const GameMap& map, const Vec3& x0, const OrbitSettings& orbit_settings,
                              const DetectSettings& detect_settings, const LleSettings& lle_settings) {
  const OrbitResult<Vec3> orbit = simulate_orbit(map, x0, orbit_settings);
  Attractor<Vec3> attractor = detect_attractor(orbit, detect_settings);
  if (attractor.kind == AttractorKind::Unresolved) {
    const double lle = largest_lyapunov(map, x0, lle_settings);
    attractor = detect_attractor(orbit, detect_settings, lle);
  }
  return attractor;
}

double point_distance(const Vec3& a, const Vec3& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

// Smallest over cyclic shifts of the largest pointwise distance; the sample
// phase of a cycle is arbitrary, its internal order is not.
double cyclic_match_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  const size_t k = a.size();
  double best = std::numeric_limits<double>::infinity();
  for (size_t shift = 0; shift < k; ++shift) {
    double worst = 0.0;
    for (size_t i = 0; i < k; ++i) {
      worst = std::max(worst, point_distance(a[i], b[(i + shift) % k]));
    }
    best = std::min(best, worst);
  }
  return best;
}

double bbox_diameter(const std::vector<Vec3>& pts) {
  Vec3 lo = pts.front();
  Vec3 hi = pts.front();
  for (const Vec3& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

// Symmetric mean nearest-neighbour distance between two samplings of a
// chaotic set.
double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  auto one_way = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    double total = 0.0;
    for (const Vec3& p : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const Vec3& q : to) nearest = std::min(nearest, point_distance(p, q));
      total += nearest;
    }
    return total / static_cast<double>(from.size());
  };
  return std::max(one_way(a, b), one_way(b, a));
}

bool same_attractor(const CatalogEntry& entry, const Attractor<Vec3>& a, double match_tol) {
  if (entry.kind != a.kind || entry.period != a.period) return false;
  if (entry.kind == AttractorKind::FixedPoint || entry.kind == AttractorKind::Cycle) {
    if (entry.points.size() != a.points.size()) return false;
    return cyclic_match_distance(entry.points, a.points) < match_tol;
  }
  if (entry.kind == AttractorKind::Chaotic) {
    if (entry.points.empty() || a.points.empty()) return false;
    const double scale = std::max(bbox_diameter(entry.points), bbox_diameter(a.points));
    return chamfer_distance(entry.points, a.points) < std::max(match_tol, 0.1 * scale);
  }
  return false;
}

int catalog_id_by_identity(std::vector<CatalogEntry>& catalog, const Attractor<Vec3>& a, double match_tol) {
  for (size_t i = 0; i < catalog.size(); ++i) {
    if (same_attractor(catalog[i], a, match_tol)) return static_cast<int>(i);
  }
  catalog.push_back({a.kind, a.period, a.points, a.lle});
  return static_cast<int>(catalog.size() - 1);
}

int catalog_id_by_period(std::vector<CatalogEntry>& catalog, const Attractor<Vec3>& a) {
  for (size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].kind == a.kind && catalog[i].period == a.period) return static_cast<int>(i);
  }
  catalog.push_back({a.kind, a.period, a.points, a.lle});
  return static_cast<int>(catalog.size() - 1);
}

}  // namespace

std::vector<Bif1dPoint> bifurcation_scan_1d(const ModelParams& params, const AdjustmentRates& rates_template,
                                            const SweepAxis& sweep, const StrategyState& x0,
                                            const Bif1dSettings& settings) {
  if (!(sweep.lo < sweep.hi) || sweep.n < 2) {
    throw PreconditionError("bifurcation_scan_1d requires lo < hi and n >= 2");
  }
  std::vector<Bif1dPoint> out;
  out.reserve(static_cast<size_t>(sweep.n));
  Vec3 start = x0.vec();
  for (int i = 0; i < sweep.n; ++i) {
    const double value = sweep_value(sweep, i);
    const GameMap map = make_game_map(params, with_axis(rates_template, sweep.which, value));

    const OrbitResult<Vec3> orbit = simulate_orbit(map, start, settings.orbit);
    std::optional<double> lle;
    if (settings.with_lle && !orbit.diverged) lle = largest_lyapunov(map, start, settings.lle);
    Attractor<Vec3> attractor = detect_attractor(orbit, settings.detect, lle);
    if (attractor.kind == AttractorKind::Unresolved && !lle && !orbit.diverged) {
      // still need the exponent to separate chaos from unresolved
      lle = largest_lyapunov(map, start, settings.lle);
      attractor = detect_attractor(orbit, settings.detect, lle);
    }

    Bif1dPoint point;
    point.value = value;
    point.samples = orbit.samples;
    point.lle = settings.with_lle ? lle : std::nullopt;
    point.attractor = std::move(attractor);
    out.push_back(std::move(point));

    if (settings.policy == X0Policy::Follow) {
      start = (!orbit.diverged && !orbit.samples.empty()) ? orbit.samples.back() : x0.vec();
    }
  }
  return out;
}

Raster scan_2d(const ModelParams& params, const AdjustmentRates& rates_template, RateAxis x_axis,
               const GridAxis& gx, RateAxis y_axis, const GridAxis& gy, ScanMode mode, const StrategyState& x0,
               const ScanSettings& settings) {
  if (!(gx.lo < gx.hi) || !(gy.lo < gy.hi) || gx.n < 1 || gy.n < 1) {
    throw PreconditionError("scan_2d requires lo < hi and at least one cell per axis");
  }
  Raster raster;
  raster.x = gx;
  raster.y = gy;
  raster.x_label = to_string(x_axis);
  raster.y_label = to_string(y_axis);
  raster.mode = mode;

  const long n_cells = static_cast<long>(gx.n) * gy.n;
  const Vec3 start = x0.vec();

  if (mode == ScanMode::Lle) {
    raster.values.assign(static_cast<size_t>(n_cells), 0.0);
    parallel_cells(n_cells, settings.threads, [&](long cell) {
      const int ix = static_cast<int>(cell % gx.n);
      const int iy = static_cast<int>(cell / gx.n);
      const AdjustmentRates rates =
          with_axis(with_axis(rates_template, x_axis, gx.center(ix)), y_axis, gy.center(iy));
      raster.values[static_cast<size_t>(cell)] = largest_lyapunov(make_game_map(params, rates), start, settings.lle);
    });
    return raster;
  }

  std::vector<Attractor<Vec3>> cells(static_cast<size_t>(n_cells));
  parallel_cells(n_cells, settings.threads, [&](long cell) {
    const int ix = static_cast<int>(cell % gx.n);
    const int iy = static_cast<int>(cell / gx.n);
    const AdjustmentRates rates =
        with_axis(with_axis(rates_template, x_axis, gx.center(ix)), y_axis, gy.center(iy));
    cells[static_cast<size_t>(cell)] =
        classify_cell(make_game_map(params, rates), start, settings.orbit, settings.detect, settings.lle);
  });

  raster.classes.assign(static_cast<size_t>(n_cells), kUnresolvedClass);
  for (long cell = 0; cell < n_cells; ++cell) {
    const Attractor<Vec3>& a = cells[static_cast<size_t>(cell)];
    int id = kUnresolvedClass;
    if (a.kind == AttractorKind::Divergent) {
      id = kDivergentClass;
    } else if (a.kind != AttractorKind::Unresolved) {
      id = catalog_id_by_period(raster.catalog, a);
    }
    raster.classes[static_cast<size_t>(cell)] = id;
  }
  return raster;
}

Raster basin_raster(const ModelParams& params, const AdjustmentRates& rates, const GridAxis& p1_axis,
                    const GridAxis& p2_axis, double s0, const ScanSettings& settings) {
  if (!(p1_axis.lo < p1_axis.hi) || !(p2_axis.lo < p2_axis.hi) || p1_axis.n < 1 || p2_axis.n < 1) {
    throw PreconditionError("basin_raster requires lo < hi and at least one cell per axis");
  }
  if (s0 < 0.0) throw PreconditionError("basin_raster requires s0 >= 0");

  Raster raster;
  raster.x = p1_axis;
  raster.y = p2_axis;
  raster.x_label = "p1_0";
  raster.y_label = "p2_0";
  raster.mode = ScanMode::Period;

  const long n_cells = static_cast<long>(p1_axis.n) * p2_axis.n;
  const GameMap map = make_game_map(params, rates);

  std::vector<Attractor<Vec3>> cells(static_cast<size_t>(n_cells));
  parallel_cells(n_cells, settings.threads, [&](long cell) {
    const int ix = static_cast<int>(cell % p1_axis.n);
    const int iy = static_cast<int>(cell / p1_axis.n);
    const Vec3 start{p1_axis.center(ix), p2_axis.center(iy), s0};
    cells[static_cast<size_t>(cell)] = classify_cell(map, start, settings.orbit, settings.detect, settings.lle);
  });

  raster.classes.assign(static_cast<size_t>(n_cells), kUnresolvedClass);
  for (long cell = 0; cell < n_cells; ++cell) {
    const Attractor<Vec3>& a = cells[static_cast<size_t>(cell)];
    int id = kUnresolvedClass;
    if (a.kind == AttractorKind::Divergent) {
      id = kDivergentClass;
    } else if (a.kind != AttractorKind::Unresolved) {
      id = catalog_id_by_identity(raster.catalog, a, settings.match_tol);
    }
    raster.classes[static_cast<size_t>(cell)] = id;
  }
  return raster;
}

std::vector<StabilityVoxel> stability_region_3d(const ModelParams& params, const GridAxis& a1, const GridAxis& a2,
                                                const GridAxis& a3) {
  if (a1.n < 1 || a2.n < 1 || a3.n < 1) {
    throw PreconditionError("stability_region_3d requires at least one voxel per axis");
  }
  const EquilibriumRecord interior{"E8", equilibrium_closed_form(params), true, StabilityClass::NotEvaluated};
  std::vector<StabilityVoxel> out;
  out.reserve(static_cast<size_t>(a1.n) * a2.n * a3.n);
  for (int k = 0; k < a3.n; ++k) {
    for (int j = 0; j < a2.n; ++j) {
      for (int i = 0; i < a1.n; ++i) {
        const AdjustmentRates rates{a1.center(i), a2.center(j), a3.center(k)};
        const bool stable = classify_equilibrium(params, rates, interior) == StabilityClass::Stable;
        out.push_back({rates.alpha1, rates.alpha2, rates.alpha3, stable});
      }
    }
  }
  return out;
}

ControlThresholdResult find_control_threshold(const ModelParams& params, const AdjustmentRates& rates, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("find_control_threshold requires tol > 0");
  const StrategyState interior = equilibrium_closed_form(params);
  const auto stable_at = [&](double kappa) {
    return jury_stable(char_coeffs(jacobian(params, rates.scaled(kappa), interior)));
  };
  if (stable_at(1.0)) return {1.0, true};
  // Small gains contract toward the equilibrium; probe downward for a stable
  // bracket end instead of trusting an arbitrary epsilon (Jury margins decay
  // like kappa^3 and drown in rounding too close to zero).
  double lo = 0.5;
  while (lo > 1e-6 && !stable_at(lo)) lo *= 0.5;
  if (!stable_at(lo)) return {0.0, false};
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (stable_at(mid) ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), false};
}

}  // namespace datagame
