#include "datagame/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace datagame {

std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::Stable: return "stable";
    case StabilityClass::Unstable: return "unstable";
    case StabilityClass::Marginal: return "marginal";
    case StabilityClass::NotEvaluated: return "not_evaluated";
  }
  return "?";
}

Vec3 profit_gradients(const ModelParams& p, const StrategyState& x) {
  return {p.a - 2.0 * p.b * x.p1 + p.b * x.p2 + p.b * p.r,
          p.a + p.b * (x.p1 - 2.0 * x.p2) + p.theta * x.s + p.b * p.r,
          p.theta * (x.p2 - p.r) - p.eta * x.s};
}

StrategyState step(const ModelParams& p, const AdjustmentRates& al, const StrategyState& x) {
  const Vec3 g = profit_gradients(p, x);
  return {x.p1 + al.alpha1 * x.p1 * g[0],
          x.p2 + al.alpha2 * x.p2 * g[1],
          x.s + al.alpha3 * x.s * g[2]};
}

StrategyState controlled_step(const ModelParams& p, const AdjustmentRates& al, ControlParam c,
                              const StrategyState& x) {
  return step(p, al.scaled(c.kappa), x);
}

std::array<EquilibriumRecord, 8> fixed_points(const ModelParams& p) {
  const double th2 = p.theta * p.theta;
  const double den4 = 2.0 * p.b * p.eta - th2;

  auto check = [](double den, const char* name, const char* affected) {
    if (std::abs(den) <= kBoundaryBand) {
      std::ostringstream os;
      os << "fixed_points: denominator " << name << " = " << den << " is singular (affects " << affected << ")";
      throw SingularParameterError(os.str());
    }
  };
  check(p.b, "b", "E3, E4, E5, E6, E7, E8");
  check(p.eta, "eta", "E2, E7");
  check(den4, "2*b*eta - theta^2", "E4");
  // E8 singularity is reported by equilibrium_closed_form below.

  const double boundary_p2 = (p.a + p.b * p.r) / (2.0 * p.b);
  const double neg_s = -p.r * p.theta / p.eta;
  const StrategyState e4{0.0, p.r + (p.a - p.b * p.r) * p.eta / den4, (p.a - p.b * p.r) * p.theta / den4};
  const StrategyState e5{p.a / p.b + p.r, p.a / p.b + p.r, 0.0};
  const StrategyState e8 = equilibrium_closed_form(p);

  auto record = [](const char* label, StrategyState x) {
    const bool ok = x.p1 >= 0.0 && x.p2 >= 0.0 && x.s >= 0.0;
    return EquilibriumRecord{label, x, ok, StabilityClass::NotEvaluated};
  };
  return {record("E1", {0.0, 0.0, 0.0}),
          record("E2", {0.0, 0.0, neg_s}),
          record("E3", {0.0, boundary_p2, 0.0}),
          record("E4", e4),
          record("E5", e5),
          record("E6", {boundary_p2, 0.0, 0.0}),
          record("E7", {boundary_p2, 0.0, neg_s}),
          record("E8", e8)};
}

Mat3 jacobian(const ModelParams& p, const AdjustmentRates& al, const StrategyState& x) {
  Mat3 j;
  j(0, 0) = 1.0 + al.alpha1 * (p.a + p.b * (x.p2 - 4.0 * x.p1 + p.r));
  j(0, 1) = p.b * x.p1 * al.alpha1;
  j(0, 2) = 0.0;
  j(1, 0) = p.b * x.p2 * al.alpha2;
  j(1, 1) = 1.0 + al.alpha2 * (p.a + p.b * (x.p1 - 4.0 * x.p2 + p.r) + x.s * p.theta);
  j(1, 2) = x.p2 * al.alpha2 * p.theta;
  j(2, 0) = 0.0;
  j(2, 1) = x.s * al.alpha3 * p.theta;
  j(2, 2) = 1.0 - al.alpha3 * (2.0 * x.s * p.eta - (x.p2 - p.r) * p.theta);
  return j;
}

CubicCoeffs char_coeffs(const Mat3& j) {
  const double a2 = -(j(0, 0) + j(1, 1) + j(2, 2));
  const double a1 = (j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0)) +
                    (j(0, 0) * j(2, 2) - j(0, 2) * j(2, 0)) +
                    (j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1));
  const double a0 = -j.determinant();
  return {a2, a1, a0};
}

bool jury_stable(const CubicCoeffs& c) {
  return 1.0 + c.a2 + c.a1 + c.a0 > 0.0 &&
         1.0 - c.a2 + c.a1 - c.a0 > 0.0 &&
         std::abs(c.a0) < 1.0 &&
         std::abs(1.0 - c.a0 * c.a0) > std::abs(c.a1 - c.a0 * c.a2);
}

double jury_margin(const CubicCoeffs& c) {
  const double m1 = 1.0 + c.a2 + c.a1 + c.a0;
  const double m2 = 1.0 - c.a2 + c.a1 - c.a0;
  const double m3 = 1.0 - std::abs(c.a0);
  const double m4 = std::abs(1.0 - c.a0 * c.a0) - std::abs(c.a1 - c.a0 * c.a2);
  return std::min(std::min(m1, m2), std::min(m3, m4));
}

std::array<std::complex<double>, 3> cubic_roots(const CubicCoeffs& c) {
  Mat3 companion;
  companion << 0.0, 0.0, -c.a0,
               1.0, 0.0, -c.a1,
               0.0, 1.0, -c.a2;
  Eigen::EigenSolver<Mat3> solver(companion, false);
  const auto ev = solver.eigenvalues();
  return {ev[0], ev[1], ev[2]};
}

double spectral_radius(const CubicCoeffs& c) {
  const auto roots = cubic_roots(c);
  return std::max({std::abs(roots[0]), std::abs(roots[1]), std::abs(roots[2])});
}

double spectral_radius(const Mat3& j) {
  Eigen::EigenSolver<Mat3> solver(j, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

StabilityClass classify_equilibrium(const ModelParams& p, const AdjustmentRates& al, const EquilibriumRecord& e) {
  const CubicCoeffs c = char_coeffs(jacobian(p, al, e.state));
  const double m1 = 1.0 + c.a2 + c.a1 + c.a0;
  const double m2 = 1.0 - c.a2 + c.a1 - c.a0;
  const double m3 = 1.0 - std::abs(c.a0);
  const double m4 = std::abs(1.0 - c.a0 * c.a0) - std::abs(c.a1 - c.a0 * c.a2);
  const double closest = std::min(std::min(std::abs(m1), std::abs(m2)), std::min(std::abs(m3), std::abs(m4)));
  if (closest <= kBoundaryBand) return StabilityClass::Marginal;
  if (m1 > 0.0 && m2 > 0.0 && m3 > 0.0 && m4 > 0.0) return StabilityClass::Stable;
  return StabilityClass::Unstable;
}

}  // namespace datagame
