#pragma once

#include <iosfwd>

namespace datagame::cli {

// Dispatches the subcommands (equilibrium, fixed-points, orbit, bif1d,
// scan2d, basin, stable-region, lle, control-threshold). Returns 0 on
// success, 1 on configuration/usage errors, 2 on singular-parameter errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace datagame::cli
