#pragma once

// Exact eigenfunctions of H = p^2 + x^2 + 2i f(t) x,
//
//   Psi_n(x, t) = exp(-i E_n t - i theta(t)) exp(alpha z - z^2 / 2) H_n(z),
//   z = x + i g(t),  E_n = 2n + 1,
//
// and the PT-symmetry and parity diagnostics evaluated on them.

#include "ptspec/model.hpp"
#include "ptspec/shift_solver.hpp"

namespace ptspec {

/// Endpoint decay required of every sampled state: |psi| at both grid ends
/// below this fraction of max|psi|.
inline constexpr double kEndpointDecay = 1e-12;

class ClosedFormState {
 public:
  /// Pairs a drive with its shift solution. Throws ConsistencyError if the
  /// shift does not solve the auxiliary ODE for the drive.
  ClosedFormState(int n, Drive drive, ShiftSolution shift);

  /// Convenience: analytic shift for constant and polynomial drives.
  static ClosedFormState analytic(int n, const Drive& drive);

  int n() const { return n_; }
  /// Oscillator level 2n + 1.
  double level() const { return 2.0 * n_ + 1.0; }
  const Drive& drive() const { return drive_; }
  const ShiftSolution& shift() const { return shift_; }
  const PhaseIntegral& phase() const { return phase_; }

 private:
  int n_;
  Drive drive_;
  ShiftSolution shift_;
  PhaseIntegral phase_;
};

complex psi_eval(const ClosedFormState& s, double x, double t);

/// Samples Psi_n on the grid. Throws TruncationError when the endpoint
/// amplitudes exceed kEndpointDecay * max|psi|.
GridState psi_sample(const ClosedFormState& s, const SpatialGrid& grid, double t);

/// ||i dPsi/dt + d2Psi/dx2 - (x^2 + 2i f x) Psi|| / ||Psi|| on the grid
/// interior (two nodes trimmed at each edge), with centred second-order
/// differences in x and t.
double pde_residual(const ClosedFormState& s, const SpatialGrid& grid, double t, double dt_fd);

/// True iff f(-t) = f(t). Exact for constant and polynomial drives; sampled
/// drives are compared at their sample points to 1e-10 and need a span
/// symmetric about t = 0 (UndecidableError otherwise).
bool pt_check_hamiltonian(const Drive& d);

struct PtStateReport {
  /// min over unit |lambda| of ||PT psi - lambda psi|| / ||psi||.
  double deviation;
  /// The minimising lambda.
  complex phase;
};

/// Compares (PT psi)(x, t) = conj(psi(-x, -t)) with psi on a symmetric grid.
/// Throws NotApplicableError for drives that are not even in time.
PtStateReport pt_check_state(const ClosedFormState& s, const SpatialGrid& grid, double t);

/// Deviation at or below which a state counts as a PT eigenfunction.
inline constexpr double kPtStateTolerance = 1e-8;

struct ParityReport {
  double uimag_odd_defect;
  double modulus_even_defect;
  bool satisfied;
};

inline constexpr double kParityTolerance = 1e-10;

/// Checks U_I(-x) = -U_I(x) for U_I = 2 f(t) x and |psi(-x)|^2 = |psi(x)|^2,
/// each as a max defect relative to the largest value on a symmetric grid.
ParityReport parity_condition_check(const ClosedFormState& s, const SpatialGrid& grid, double t);

/// Symmetric grid at spacing close to `spacing` whose half-width is at least
/// max(12, |g| + |alpha| + 10) at time t. Node count is odd.
SpatialGrid recommended_grid(const ShiftSolution& shift, double t, double spacing = 0.01);

}  // namespace ptspec
