#pragma once

// Subcommands of the ptspec command-line tool. `run` is the whole program
// minus process setup, so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <string_view>

#include "ptspec/model.hpp"
#include "ptspec/shift_solver.hpp"

namespace ptspec::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitTruncation = 3,
  kExitCapability = 4,
};

inline constexpr double kDefaultCnStep = 1e-4;
inline constexpr double kVerifyPdeSpacing = 6e-3;
inline constexpr double kVerifyPdeTimeStep = 1e-4;

/// "xmin:xmax:npts".
SpatialGrid parse_grid_spec(std::string_view spec);

/// Analytic shift for constant and polynomial drives. Sampled drives are
/// integrated over their whole span from g = f(t0), gdot = f'(t0).
ShiftSolution shift_for(const Drive& d, double ode_dt);

/// Formats with 17 significant digits, as %.17g.
std::string format_double(double v);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptspec::cli
