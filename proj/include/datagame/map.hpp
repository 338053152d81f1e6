#pragma once

#include <concepts>

#include "datagame/dynamics.hpp"

namespace datagame {

// A discrete map together with its exact Jacobian. The analysis engine is
// written against this shape so that oracle maps (e.g. the logistic map in
// the tests) can drive the same code paths as the game map.
template <class M>
concept DifferentiableMap = requires(const M& m, const typename M::State& x) {
  typename M::State;
  typename M::Jacobian;
  { m.dimension() } -> std::convertible_to<int>;
  { m.step(x) } -> std::convertible_to<typename M::State>;
  { m.jacobian(x) } -> std::convertible_to<typename M::Jacobian>;
};

// The repeated-game map bound to fixed parameters and rates.
struct GameMap {
  using State = Vec3;
  using Jacobian = Mat3;

  ModelParams params;
  AdjustmentRates rates;

  int dimension() const { return 3; }
  State step(const State& x) const { return datagame::step(params, rates, StrategyState::from(x)).vec(); }
  Jacobian jacobian(const State& x) const { return datagame::jacobian(params, rates, StrategyState::from(x)); }
};

inline GameMap make_game_map(const ModelParams& params, const AdjustmentRates& rates) {
  return {params, rates};
}

// The hybrid-controlled map; identical to the uncontrolled map with rates
// scaled by kappa.
inline GameMap make_controlled_game_map(const ModelParams& params, const AdjustmentRates& rates,
                                        ControlParam control) {
  return {params, rates.scaled(control.kappa)};
}

}  // namespace datagame
