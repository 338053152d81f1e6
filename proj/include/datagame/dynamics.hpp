#pragma once

#include <array>
#include <complex>
#include <string>

#include "datagame/model.hpp"

namespace datagame {

// Per-period adjustment speeds of the three decision variables, all
// strictly positive.
struct AdjustmentRates {
  double alpha1;
  double alpha2;
  double alpha3;

  AdjustmentRates scaled(double k) const { return {k * alpha1, k * alpha2, k * alpha3}; }
};

// Hybrid-control gain in (0, 1]; kappa = 1 reproduces the uncontrolled map.
struct ControlParam {
  double kappa;
};

enum class StabilityClass { Stable, Unstable, Marginal, NotEvaluated };

std::string to_string(StabilityClass c);

struct EquilibriumRecord {
  std::string label;  // "E1".."E8"
  StrategyState state;
  bool admissible;    // all coordinates >= 0
  StabilityClass stability = StabilityClass::NotEvaluated;
};

// Marginal profits that drive the adjustment process:
// (d pi1 / d p1, d pi2 / d p2, d pi2 / d s).
Vec3 profit_gradients(const ModelParams& params, const StrategyState& x);

// One period of the bounded-rationality map: each variable moves by
// rate * value * own marginal profit.
StrategyState step(const ModelParams& params, const AdjustmentRates& rates, const StrategyState& x);

// Hybrid-controlled period: the kappa-blend of the map with the identity.
// Computed as `step` with all rates scaled by kappa; the two forms are
// algebraically identical and this one keeps controlled and rate-scaled
// orbits in exact agreement.
StrategyState controlled_step(const ModelParams& params, const AdjustmentRates& rates, ControlParam control,
                              const StrategyState& x);

// The eight equilibria of the map in their conventional order. Admissibility
// is flagged; stability is NotEvaluated (it depends on rates, see
// classify_equilibrium). Throws SingularParameterError naming the affected
// equilibrium when one of the denominators eta, b, 2*b*eta - theta^2,
// 3*b*eta - 2*theta^2 vanishes.
std::array<EquilibriumRecord, 8> fixed_points(const ModelParams& params);

// Exact Jacobian of `step` at x.
Mat3 jacobian(const ModelParams& params, const AdjustmentRates& rates, const StrategyState& x);

// Monic characteristic polynomial lambda^3 + a2 lambda^2 + a1 lambda + a0.
struct CubicCoeffs {
  double a2;
  double a1;
  double a0;
};

CubicCoeffs char_coeffs(const Mat3& J);

// Jury criterion for the cubic: true iff all roots lie strictly inside the
// unit circle, tested through the four coefficient inequalities.
bool jury_stable(const CubicCoeffs& c);

// Smallest of the four Jury expressions; positive means stable with that
// much slack, magnitudes within kBoundaryBand count as marginal.
double jury_margin(const CubicCoeffs& c);

// Roots of the cubic via its companion matrix.
std::array<std::complex<double>, 3> cubic_roots(const CubicCoeffs& c);

double spectral_radius(const CubicCoeffs& c);
double spectral_radius(const Mat3& J);

// Stable/Unstable by to the Jury test at e.state, Marginal when any Jury
// expression is within kBoundaryBand of its boundary.
StabilityClass classify_equilibrium(const ModelParams& params, const AdjustmentRates& rates,
                                    const EquilibriumRecord& e);

}  // namespace datagame
