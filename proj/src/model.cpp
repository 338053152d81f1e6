#include "datagame/model.hpp"

#include <cmath>
#include <sstream>

namespace datagame {

namespace {

std::string range_message(const char* field, double value, const char* bound) {
  std::ostringstream os;
  os << field << " must satisfy " << bound << " (got " << value << ")";
  return os.str();
}

// Denominator of the interior equilibrium.
double interior_den(const ModelParams& p) { return 3.0 * p.b * p.eta - 2.0 * p.theta * p.theta; }

void require_interior_regular(const ModelParams& p, const char* who) {
  if (std::abs(interior_den(p)) <= kBoundaryBand) {
    std::ostringstream os;
    os << who << ": 3*b*eta - 2*theta^2 = " << interior_den(p) << " is singular";
    throw SingularParameterError(os.str());
  }
}

}  // namespace

std::optional<std::string> validate(const ModelParams& p) {
  if (!(p.a > 0.0)) return range_message("a", p.a, "a > 0");
  if (!(p.b > 0.0 && p.b <= 1.0)) return range_message("b", p.b, "0 < b <= 1");
  if (!(p.theta > 0.0 && p.theta < 1.0)) return range_message("theta", p.theta, "0 < theta < 1");
  if (!(p.eta > 0.0)) return range_message("eta", p.eta, "eta > 0");
  if (!(p.r > 0.0)) return range_message("r", p.r, "r > 0");
  return std::nullopt;
}

Demand demand(const ModelParams& p, const StrategyState& x) {
  return {p.a - p.b * (x.p1 - x.p2), p.a - p.b * (x.p2 - x.p1) + p.theta * x.s};
}

MarketOutcome profits(const ModelParams& p, const StrategyState& x) {
  const Demand d = demand(p, x);
  const double pi1 = d.d1 * x.p1 + d.d2 * p.r;
  const double pi2 = d.d2 * (x.p2 - p.r) - 0.5 * p.eta * x.s * x.s;
  return {d.d1, d.d2, pi1, pi2};
}

StrategyState equilibrium_closed_form(const ModelParams& p) {
  require_interior_regular(p, "equilibrium_closed_form");
  const double den = interior_den(p);
  const double p1 = p.r + 0.5 * p.a * (1.0 / p.b + 3.0 * p.eta / den);
  const double p2 = p.r + 3.0 * p.a * p.eta / den;
  const double s = 3.0 * p.a * p.theta / den;
  return {p1, p2, s};
}

std::pair<double, double> equilibrium_profits(const ModelParams& p) {
  require_interior_regular(p, "equilibrium_profits");
  const double den = interior_den(p);
  const double th2 = p.theta * p.theta;
  const double pi1 =
      p.a * (p.b * p.r * den * (6.0 * p.b * p.eta - th2) + p.a * (th2 - 3.0 * p.b * p.eta) * (th2 - 3.0 * p.b * p.eta)) /
      (p.b * den * den);
  const double pi2 = 9.0 * p.a * p.a * p.eta * (2.0 * p.b * p.eta - th2) / (2.0 * den * den);
  return {pi1, pi2};
}

bool concavity_holds(const ModelParams& p) {
  return 2.0 * p.b * p.eta - p.theta * p.theta > 0.0;
}

PriceRegime price_regime(const ModelParams& p) {
  if (!concavity_holds(p)) {
    throw PreconditionError("price_regime requires concavity (eta > theta^2 / (2b))");
  }
  require_interior_regular(p, "price_regime");
  // Sign of p1 - p2 equals the sign of -(3*b*eta - 2*theta^2); the closed-form
  // gap is -a*theta^2 / (b * (3*b*eta - 2*theta^2)).
  return interior_den(p) > 0.0 ? PriceRegime::P2Greater : PriceRegime::P1Greater;
}

double wholesale_threshold(const ModelParams& p) {
  const double den = 12.0 * p.b * p.b * p.eta - 2.0 * p.b * p.theta * p.theta;
  if (!(den > kBoundaryBand)) {
    std::ostringstream os;
    os << "wholesale_threshold: 12*b^2*eta - 2*b*theta^2 = " << den << " is not positive";
    throw SingularParameterError(os.str());
  }
  return p.a * p.theta * p.theta / den;
}

ProfitRegime profit_regime(const ModelParams& p) {
  if (!concavity_holds(p)) {
    throw PreconditionError("profit_regime requires concavity (eta > theta^2 / (2b))");
  }
  require_interior_regular(p, "profit_regime");
  const double r_hat = wholesale_threshold(p);
  if (std::abs(p.r - r_hat) <= kBoundaryBand) return ProfitRegime::Equal;
  const bool low_eta = interior_den(p) < 0.0;  // theta^2/(2b) < eta < 2*theta^2/(3b)
  if (low_eta) {
    return p.r < r_hat ? ProfitRegime::Pi1Greater : ProfitRegime::Pi2Greater;
  }
  return p.r > r_hat ? ProfitRegime::Pi1Greater : ProfitRegime::Pi2Greater;
}

}  // namespace datagame
