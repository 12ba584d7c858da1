#pragma once

// Crank-Nicolson propagation of i dPsi/dt = -d2Psi/dx2 + V(x, t) Psi with a
// complex potential, used as an independent check on the closed form.

#include <functional>
#include <span>
#include <vector>

#include "ptspec/model.hpp"

namespace ptspec {

using Potential = std::function<complex(double x, double t)>;

/// V(x, t) = x^2 + 2i f(t) x.
Potential drive_potential(const Drive& d);

/// Norm growth beyond this factor over the initial state aborts propagation.
inline constexpr double kMaxNormGrowth = 1e12;
/// Default reflection threshold: amplitude at the first
/// interior node relative to max|psi| that counts as reaching the boundary.
inline constexpr double kReflectionThreshold = 1e-8;

struct PropagationConfig {
  SpatialGrid grid;
  double dt;
  double t0;
  double t1;
  Potential potential;
  /// Edge amplitude relative to max|psi| that aborts propagation.
  double reflection_threshold = kReflectionThreshold;

  /// Number of steps |t1 - t0| / dt. Throws InvalidArgument unless it is a
  /// positive integer to within 1e-9, the grid is symmetric and the
  /// potential is set.
  long steps() const;
};

/// Solves a tridiagonal system in place by the Thomas algorithm, without
/// pivoting. `lower[0]` and `upper[n-1]` are ignored. Throws InvalidArgument
/// on mismatched lengths or a zero pivot.
void solve_tridiagonal(std::span<const complex> lower, std::span<const complex> diag,
                       std::span<const complex> upper, std::span<complex> rhs);

/// Called after every `every`-th step (and once for the initial state) with
/// the current state.
using StepObserver = std::function<void(const GridState&)>;

/// Advances `initial` from cfg.t0 to cfg.t1 with Dirichlet zero boundaries.
/// Each step solves
///   (B + i dt/2 A) psi' = (B - i dt/2 A) psi,   A = -D + B V(t + dt/2),
/// where D is the three-point second difference and B = tridiag(1, 10, 1)/12
/// its compact fourth-order correction, so each step is one tridiagonal
/// solve. The norm is not conserved when Im V != 0.
///
/// Throws DivergenceError on non-finite amplitudes or norm growth above
/// kMaxNormGrowth, ReflectionError when amplitude reaches the boundary,
/// TruncationError when the initial state has not decayed at the edges.
GridState crank_nicolson_propagate(const GridState& initial, const PropagationConfig& cfg);
GridState crank_nicolson_propagate(const GridState& initial, const PropagationConfig& cfg,
                                   const StepObserver& observer, long every);

struct NormSample {
  double t;
  double norm_sq;
};

/// Simpson norm of the propagated state every `sample_every` steps, starting
/// with the initial state.
std::vector<NormSample> norm_trajectory(const GridState& initial, const PropagationConfig& cfg,
                                        long sample_every);

}  // namespace ptspec
