#pragma once

#include <optional>
#include <string>
#include <utility>

#include "datagame/types.hpp"

namespace datagame {

// Static game parameters. Admissible ranges: a > 0, 0 < b <= 1,
// 0 < theta < 1, eta > 0, r > 0.
struct ModelParams {
  double a;      // potential market size
  double b;      // cross-price elasticity
  double theta;  // consumer sensitivity to expected business value
  double eta;    // investment-cost coefficient
  double r;      // wholesale price per unit of data
};

// One point in decision space. Negative coordinates are representable on
// purpose: several equilibria of the dynamic map live outside the
// admissible orthant and still have to be reported and classified.
struct StrategyState {
  double p1;  // direct-sale price
  double p2;  // platform-sale price
  double s;   // expected business value per unit of data

  Vec3 vec() const { return {p1, p2, s}; }
  static StrategyState from(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

struct Demand {
  double d1;
  double d2;
};

struct MarketOutcome {
  double d1;
  double d2;
  double pi1;  // enterprise profit
  double pi2;  // platform profit
};

enum class PriceRegime { P1Greater, P2Greater, Equal };
enum class ProfitRegime { Pi1Greater, Pi2Greater, Equal };

// Field-specific message for the first violated parameter range, or nullopt
// when params are admissible.
std::optional<std::string> validate(const ModelParams& params);

// Channel demands d1 = a - b(p1 - p2), d2 = a - b(p2 - p1) + theta*s.
// Total on all real states; negative demands are the caller's concern.
Demand demand(const ModelParams& params, const StrategyState& x);

// pi1 = d1*p1 + d2*r,  pi2 = d2*(p2 - r) - eta*s^2/2.
MarketOutcome profits(const ModelParams& params, const StrategyState& x);

// Interior equilibrium (p1*, p2*, s*). Throws SingularParameterError when
// 3*b*eta - 2*theta^2 is within kBoundaryBand of zero.
StrategyState equilibrium_closed_form(const ModelParams& params);

// Equilibrium profits (pi1*, pi2*) by their own closed forms; agrees with
// profits(equilibrium_closed_form(params)) to tight tolerance.
std::pair<double, double> equilibrium_profits(const ModelParams& params);

// Joint concavity of the two objectives: 2*b*eta - theta^2 > 0 (strict; the
// boundary counts as failing).
bool concavity_holds(const ModelParams& params);

// Ordering of the two equilibrium prices. Requires concavity; throws
// SingularParameterError on the eta = 2*theta^2/(3b) boundary where the
// equilibrium itself is singular.
PriceRegime price_regime(const ModelParams& params);

// Root r_hat of pi1*(r) = pi2*(r) in the wholesale price:
// r_hat = a*theta^2 / (12 b^2 eta - 2 b theta^2).
double wholesale_threshold(const ModelParams& params);

// Ordering of the two equilibrium profits via the threshold case split.
ProfitRegime profit_regime(const ModelParams& params);

}  // namespace datagame
