#include "datagame/analysis.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "support/logistic_map.hpp"
#include "support/oracles.hpp"

using namespace datagame;
using datagame::testing::LogisticMap;
using datagame::testing::ParamSampler;
using datagame::testing::logistic_state;

namespace {

const ModelParams kBaseline{2.0, 0.4, 0.2, 0.5, 0.6};
const AdjustmentRates kMildRates{0.1, 0.1, 0.1};
const Vec3 kOnes{1.0, 1.0, 1.0};

Vec3 interior() { return equilibrium_closed_form(kBaseline).vec(); }

}  // namespace

TEST_CASE("orbit simulation") {
  SUBCASE("starting on the equilibrium stays on it") {
    const auto orbit = simulate_orbit(make_game_map(kBaseline, kMildRates), interior(), {100, 16, 1e6});
    REQUIRE_FALSE(orbit.diverged);
    REQUIRE(orbit.samples.size() == 16);
    for (const Vec3& x : orbit.samples) {
      CHECK((x - interior()).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
  SUBCASE("mild rates pull the orbit onto the equilibrium") {
    const auto orbit = simulate_orbit(make_game_map(kBaseline, kMildRates), kOnes, {5000, 32, 1e6});
    REQUIRE_FALSE(orbit.diverged);
    for (const Vec3& x : orbit.samples) {
      CHECK((x - interior()).lpNorm<Eigen::Infinity>() < 1e-6);
    }
  }
  SUBCASE("aggressive rates diverge") {
    const auto orbit = simulate_orbit(make_game_map(kBaseline, {0.9, 0.9, 0.9}), kOnes, {5000, 32, 1e6});
    CHECK(orbit.diverged);
    CHECK(orbit.diverged_at.has_value());
  }
}

TEST_CASE("attractor detection") {
  const DetectSettings detect{1e-6, 32, 0.005};

  SUBCASE("constant tail is a fixed point") {
    OrbitResult<Vec3> orbit;
    orbit.samples.assign(40, Vec3{1.0, 2.0, 3.0});
    const auto a = detect_attractor(orbit, detect);
    CHECK(a.kind == AttractorKind::FixedPoint);
    CHECK(a.period == 1);
    REQUIRE(a.points.size() == 1);
    CHECK(a.points[0] == Vec3{1.0, 2.0, 3.0});
  }
  SUBCASE("alternating tail is a 2-cycle") {
    OrbitResult<Vec3> orbit;
    for (int i = 0; i < 40; ++i) {
      orbit.samples.push_back(i % 2 == 0 ? Vec3{1.0, 1.0, 1.0} : Vec3{1.5, 1.0, 1.0});
    }
    const auto a = detect_attractor(orbit, detect);
    CHECK(a.kind == AttractorKind::Cycle);
    CHECK(a.period == 2);
    CHECK(a.points.size() == 2);
  }
  SUBCASE("divergence wins") {
    OrbitResult<Vec3> orbit;
    orbit.diverged = true;
    orbit.diverged_at = 17;
    CHECK(detect_attractor(orbit, detect).kind == AttractorKind::Divergent);
  }
  SUBCASE("aperiodic tails need the exponent to count as chaos") {
    OrbitResult<Vec3> orbit;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 64; ++i) orbit.samples.push_back(Vec3{dist(rng), dist(rng), dist(rng)});
    CHECK(detect_attractor(orbit, detect).kind == AttractorKind::Unresolved);
    CHECK(detect_attractor(orbit, detect, 0.69).kind == AttractorKind::Chaotic);
    CHECK(detect_attractor(orbit, detect, -0.2).kind == AttractorKind::Unresolved);
  }
}

TEST_CASE("largest Lyapunov exponent") {
  SUBCASE("logistic jacobian is the exact derivative of its step") {
    const LogisticMap map{3.7};
    for (double x : {0.11, 0.37, 0.52, 0.83}) {
      const double h = 1e-6;
      const double fd = (map.step(logistic_state(x + h))[0] - map.step(logistic_state(x - h))[0]) / (2.0 * h);
      CHECK(std::abs(map.jacobian(logistic_state(x))(0, 0) - fd) < 1e-8);
    }
  }
  SUBCASE("fully chaotic logistic map gives ln 2") {
    const double lle = largest_lyapunov(LogisticMap{4.0}, logistic_state(0.3), {5000, 20000, 1e6});
    CHECK(std::abs(lle - std::log(2.0)) < 0.01);
  }
  SUBCASE("logistic 2-cycle gives a negative exponent") {
    CHECK(largest_lyapunov(LogisticMap{3.2}, logistic_state(0.3), {5000, 20000, 1e6}) < -0.1);
  }
  SUBCASE("zero rates freeze the tangent") {
    const double lle = largest_lyapunov(make_game_map(kBaseline, {0.0, 0.0, 0.0}), kOnes, {100, 1000, 1e6});
    CHECK(lle == 0.0);
  }
  SUBCASE("stable fixed point: exponent equals the log spectral radius") {
    const double lle = largest_lyapunov(make_game_map(kBaseline, kMildRates), kOnes, {5000, 20000, 1e6});
    CHECK(lle < 0.0);
    const double rho = spectral_radius(jacobian(kBaseline, kMildRates, equilibrium_closed_form(kBaseline)));
    CHECK(std::abs(lle - std::log(rho)) < 0.01);
  }
  SUBCASE("divergent orbit returns the infinity marker") {
    const double lle = largest_lyapunov(make_game_map(kBaseline, {0.9, 0.9, 0.9}), kOnes, {5000, 1000, 1e6});
    CHECK(std::isinf(lle));
    CHECK(lle > 0.0);
  }
}

TEST_CASE("one-parameter bifurcation scan") {
  SUBCASE("first flip matches the eigenvalue boundary") {
    Bif1dSettings settings;
    settings.orbit = {20000, 100, 1e6};
    settings.with_lle = false;
    const SweepAxis sweep{RateAxis::Alpha1, 0.05, 0.6, 111};
    const auto points = bifurcation_scan_1d(kBaseline, {0.1, 0.3, 0.3}, sweep, {1.0, 1.0, 1.0}, settings);
    REQUIRE(points.size() == 111);

    double first_cycle2 = -1.0;
    for (const auto& pt : points) {
      if (pt.attractor.kind == AttractorKind::Cycle && pt.attractor.period == 2) {
        first_cycle2 = pt.value;
        break;
      }
    }
    REQUIRE(first_cycle2 > 0.0);

    // bisection on the spectral radius of the equilibrium Jacobian
    const StrategyState eq = equilibrium_closed_form(kBaseline);
    auto rho = [&](double a1) { return spectral_radius(jacobian(kBaseline, {a1, 0.3, 0.3}, eq)); };
    double lo = 0.05, hi = 0.6;
    REQUIRE(rho(lo) < 1.0);
    REQUIRE(rho(hi) > 1.0);
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (rho(mid) < 1.0 ? lo : hi) = mid;
    }
    const double grid_step = (0.6 - 0.05) / 110.0;
    CHECK(std::abs(first_cycle2 - 0.5 * (lo + hi)) <= grid_step + 1e-12);
  }

  SUBCASE("a sweep inside the stable region is all fixed points") {
    Bif1dSettings settings;
    settings.orbit = {5000, 50, 1e6};
    settings.with_lle = false;
    const auto points =
        bifurcation_scan_1d(kBaseline, kMildRates, {RateAxis::Alpha1, 0.05, 0.15, 21}, {1.0, 1.0, 1.0}, settings);
    for (const auto& pt : points) {
      REQUIRE(pt.attractor.kind == AttractorKind::FixedPoint);
      CHECK((pt.attractor.points[0] - interior()).lpNorm<Eigen::Infinity>() < 1e-4);
      // stability here is certified by the Jury test as well
      const EquilibriumRecord e{"E8", equilibrium_closed_form(kBaseline), true, StabilityClass::NotEvaluated};
      CHECK(classify_equilibrium(kBaseline, with_axis(kMildRates, RateAxis::Alpha1, pt.value), e) ==
            StabilityClass::Stable);
    }
  }

  SUBCASE("two nearly identical stable points give the same attractor") {
    Bif1dSettings settings;
    settings.orbit = {5000, 50, 1e6};
    settings.with_lle = false;
    const auto points =
        bifurcation_scan_1d(kBaseline, kMildRates, {RateAxis::Alpha1, 0.1, 0.1 + 1e-9, 2}, {1.0, 1.0, 1.0}, settings);
    REQUIRE(points.size() == 2);
    REQUIRE(points[0].attractor.kind == AttractorKind::FixedPoint);
    REQUIRE(points[1].attractor.kind == AttractorKind::FixedPoint);
    CHECK((points[0].attractor.points[0] - points[1].attractor.points[0]).lpNorm<Eigen::Infinity>() < 1e-6);
  }

  SUBCASE("follow policy warm-starts from the previous point") {
    Bif1dSettings settings;
    settings.orbit = {2000, 20, 1e6};
    settings.with_lle = false;
    settings.policy = X0Policy::Follow;
    const auto points =
        bifurcation_scan_1d(kBaseline, kMildRates, {RateAxis::Alpha1, 0.05, 0.15, 11}, {1.0, 1.0, 1.0}, settings);
    for (const auto& pt : points) CHECK(pt.attractor.kind == AttractorKind::FixedPoint);
  }
}

TEST_CASE("two-parameter scan") {
  ScanSettings settings;
  settings.orbit = {2000, 64, 1e6};
  settings.lle = {2000, 10000, 1e6};
  settings.threads = 2;
  const GridAxis gx{0.05, 0.6, 24};
  const GridAxis gy{0.05, 0.6, 24};

  const Raster period = scan_2d(kBaseline, {0.1, 0.1, 0.3}, RateAxis::Alpha1, gx, RateAxis::Alpha2, gy,
                                ScanMode::Period, {1.0, 1.0, 1.0}, settings);
  REQUIRE(period.classes.size() == 24 * 24);
  REQUIRE(period.values.empty());

  SUBCASE("the taxonomy of the plane shows up") {
    bool fixed = false, cycle2 = false, cycle4 = false, chaotic = false, divergent = false;
    for (size_t cell = 0; cell < period.classes.size(); ++cell) {
      const int id = period.classes[cell];
      if (id == kDivergentClass) {
        divergent = true;
        continue;
      }
      if (id < 0) continue;
      const CatalogEntry& entry = period.catalog[static_cast<size_t>(id)];
      fixed |= entry.kind == AttractorKind::FixedPoint;
      cycle2 |= entry.kind == AttractorKind::Cycle && entry.period == 2;
      cycle4 |= entry.kind == AttractorKind::Cycle && entry.period == 4;
      chaotic |= entry.kind == AttractorKind::Chaotic;
    }
    CHECK(fixed);
    CHECK(cycle2);
    CHECK(cycle4);
    CHECK(chaotic);
    CHECK(divergent);
  }

  SUBCASE("period and exponent modes agree") {
    const Raster lle = scan_2d(kBaseline, {0.1, 0.1, 0.3}, RateAxis::Alpha1, gx, RateAxis::Alpha2, gy,
                               ScanMode::Lle, {1.0, 1.0, 1.0}, settings);
    REQUIRE(lle.values.size() == period.classes.size());
    for (size_t cell = 0; cell < period.classes.size(); ++cell) {
      const int id = period.classes[cell];
      if (id < 0) continue;
      const CatalogEntry& entry = period.catalog[static_cast<size_t>(id)];
      const double exponent = lle.values[cell];
      if (std::abs(exponent) <= 0.005) continue;  // excluded band
      if (entry.kind == AttractorKind::Chaotic) CHECK(exponent > 0.0);
      if (entry.kind == AttractorKind::FixedPoint) CHECK(exponent < 0.0);
    }
  }

  SUBCASE("cell results do not depend on the worker count") {
    ScanSettings serial = settings;
    serial.threads = 1;
    const Raster again = scan_2d(kBaseline, {0.1, 0.1, 0.3}, RateAxis::Alpha1, gx, RateAxis::Alpha2, gy,
                                 ScanMode::Period, {1.0, 1.0, 1.0}, serial);
    CHECK(again.classes == period.classes);
    REQUIRE(again.catalog.size() == period.catalog.size());
    for (size_t i = 0; i < again.catalog.size(); ++i) {
      CHECK(again.catalog[i].kind == period.catalog[i].kind);
      CHECK(again.catalog[i].period == period.catalog[i].period);
    }
  }

  SUBCASE("single stable cell") {
    const Raster one = scan_2d(kBaseline, kMildRates, RateAxis::Alpha1, {0.09, 0.11, 1}, RateAxis::Alpha2,
                               {0.09, 0.11, 1}, ScanMode::Period, {1.0, 1.0, 1.0}, settings);
    REQUIRE(one.classes.size() == 1);
    CHECK(one.classes[0] == 0);
    REQUIRE(one.catalog.size() == 1);
    CHECK(one.catalog[0].kind == AttractorKind::FixedPoint);
  }
}

TEST_CASE("basin rasters") {
  ScanSettings settings;
  settings.orbit = {5000, 64, 1e6};
  settings.threads = 2;

  SUBCASE("stable rates: one attractor, every cell reaches the equilibrium") {
    const Raster basin = basin_raster(kBaseline, kMildRates, {0.0, 12.0, 24}, {0.0, 12.0, 24}, 1.0, settings);
    REQUIRE(basin.catalog.size() == 1);
    CHECK(basin.catalog[0].kind == AttractorKind::FixedPoint);
    CHECK((basin.catalog[0].points[0] - interior()).lpNorm<Eigen::Infinity>() < 1e-4);
    for (int id : basin.classes) CHECK((id == 0 || id == kDivergentClass));
  }

  SUBCASE("past the flip: one 2-cycle plus divergence") {
    const Raster basin =
        basin_raster(kBaseline, {0.3, 0.3, 0.3}, {0.0, 12.0, 24}, {0.0, 12.0, 24}, 1.0, settings);
    REQUIRE(basin.catalog.size() == 1);
    CHECK(basin.catalog[0].kind == AttractorKind::Cycle);
    CHECK(basin.catalog[0].period == 2);
    long divergent = 0;
    for (int id : basin.classes) divergent += id == kDivergentClass ? 1 : 0;
    CHECK(divergent > 0);

    // catalog soundness: the representative points close after k steps
    const GameMap map = make_game_map(kBaseline, {0.3, 0.3, 0.3});
    for (const CatalogEntry& entry : basin.catalog) {
      for (const Vec3& point : entry.points) {
        Vec3 y = point;
        for (int k = 0; k < entry.period; ++k) y = map.step(y);
        CHECK((y - point).lpNorm<Eigen::Infinity>() < 10.0 * settings.detect.cycle_tol);
      }
    }
  }

  SUBCASE("a window deep in the divergent zone") {
    const Raster basin =
        basin_raster(kBaseline, {0.3, 0.3, 0.3}, {40.0, 60.0, 8}, {40.0, 60.0, 8}, 1.0, settings);
    CHECK(basin.catalog.empty());
    for (int id : basin.classes) CHECK(id == kDivergentClass);
  }
}

TEST_CASE("stability region voxels") {
  SUBCASE("known stable and unstable voxels") {
    const auto stable_voxel = stability_region_3d(kBaseline, {0.05, 0.15, 1}, {0.05, 0.15, 1}, {0.05, 0.15, 1});
    REQUIRE(stable_voxel.size() == 1);
    CHECK(stable_voxel[0].alpha1 == doctest::Approx(0.1));
    CHECK(stable_voxel[0].stable);

    const auto unstable_voxel = stability_region_3d(kBaseline, {0.5, 0.6, 1}, {0.25, 0.35, 1}, {0.25, 0.35, 1});
    REQUIRE(unstable_voxel.size() == 1);
    CHECK_FALSE(unstable_voxel[0].stable);
  }
  SUBCASE("along alpha1 the stable set is an interval from zero") {
    const auto voxels = stability_region_3d(kBaseline, {0.0, 0.6, 60}, {0.25, 0.35, 1}, {0.25, 0.35, 1});
    REQUIRE(voxels.size() == 60);
    bool seen_unstable = false;
    CHECK(voxels.front().stable);
    for (const auto& v : voxels) {
      if (!v.stable) seen_unstable = true;
      if (seen_unstable) CHECK_FALSE(v.stable);
    }
    CHECK(seen_unstable);
  }
}

TEST_CASE("control threshold") {
  SUBCASE("already stable rates need no control") {
    const auto result = find_control_threshold(kBaseline, kMildRates);
    CHECK(result.already_stable);
    CHECK(result.kappa_star == 1.0);
  }
  SUBCASE("a chaotic rate vector gets an interior threshold") {
    const AdjustmentRates rates{0.58, 0.3, 0.3};
    const auto result = find_control_threshold(kBaseline, rates);
    REQUIRE_FALSE(result.already_stable);
    REQUIRE(result.kappa_star > 0.0);
    REQUIRE(result.kappa_star < 1.0);
    const StrategyState eq = equilibrium_closed_form(kBaseline);
    CHECK(jury_stable(char_coeffs(jacobian(kBaseline, rates.scaled(0.99 * result.kappa_star), eq))));
    CHECK_FALSE(jury_stable(char_coeffs(jacobian(kBaseline, rates.scaled(1.01 * result.kappa_star), eq))));
  }
  SUBCASE("doubling every rate halves the threshold") {
    const AdjustmentRates rates{0.58, 0.3, 0.3};
    const double k1 = find_control_threshold(kBaseline, rates).kappa_star;
    const double k2 = find_control_threshold(kBaseline, rates.scaled(2.0)).kappa_star;
    CHECK(std::abs(k2 - 0.5 * k1) < 2e-6);
  }
}

TEST_CASE("Jury classification against the orbit oracle") {
  ParamSampler sampler(4242);
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> rate_dist(0.02, 0.8);
  int stable_seen = 0;
  int unstable_seen = 0;
  int checked = 0;
  while (checked < 200) {
    const ModelParams p = sampler.draw();
    if (3.0 * p.b * p.eta - 2.0 * p.theta * p.theta <= 0.0) continue;  // interior equilibrium must be admissible
    const AdjustmentRates rates{rate_dist(rng), rate_dist(rng), rate_dist(rng)};
    const StrategyState eq = equilibrium_closed_form(p);
    const CubicCoeffs coeffs = char_coeffs(jacobian(p, rates, eq));
    const double margin = jury_margin(coeffs);
    if (std::abs(margin) <= 1e-3) continue;  // skip the boundary band
    ++checked;

    const GameMap map = make_game_map(p, rates);
    Vec3 x = eq.vec() * (1.0 + 1e-3);
    bool converged = false;
    const long budget = margin > 0.0 ? 200000 : 20000;
    for (long t = 0; t < budget; ++t) {
      x = map.step(x);
      if (out_of_bounds(x, 1e9)) break;
      if ((x - eq.vec()).lpNorm<Eigen::Infinity>() < 1e-6) {
        converged = true;
        break;
      }
    }
    if (margin > 0.0) {
      REQUIRE(converged);
      ++stable_seen;
    } else {
      REQUIRE_FALSE(converged);
      ++unstable_seen;
    }
  }
  CHECK(stable_seen >= 20);
  CHECK(unstable_seen >= 20);
}
