#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace datagame {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// A closed-form denominator vanished (e.g. 3*b*eta - 2*theta^2 = 0); the
// message names the affected quantity.
struct SingularParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An operation was called outside its stated precondition.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Band around denominators and classification boundaries inside which strict
// inequalities are not decided; results there are reported as errors,
// EQUAL, or MARGINAL depending on the operation.
inline constexpr double kBoundaryBand = 1e-9;

}  // namespace datagame
