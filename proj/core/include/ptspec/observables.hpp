#pragma once

// Expectation values on sampled states. Every expectation is the ratio
// <psi|A|psi> / <psi|psi> with the ordinary (conjugate-linear) inner product,
// so raw unnormalised amplitudes are fine.

#include <span>
#include <string_view>

#include "ptspec/closed_form.hpp"
#include "ptspec/model.hpp"
#include "ptspec/shift_solver.hpp"

namespace ptspec {

/// Composite Simpson rule on uniform samples; an even sample count closes
/// with a Simpson 3/8 panel. Needs at least 3 samples.
double simpson(std::span<const double> y, double h);
complex simpson(std::span<const complex> y, double h);

/// Closed-form <E> for n = 0 and n = 1 at time t:
///   n = 0: 1 + g^2 + alpha^2 + 2i alpha f
///   n = 1: (E11 + 2i alpha f (3 + 2 alpha^2 + 2 g^2)) / (1 + 2 g^2 + 2 alpha^2),
///          E11 = 3 + 7 (g^2 + alpha^2) + 4 alpha^2 g^2 + 2 (alpha^4 + g^4)
/// Throws CapabilityError for n >= 2.
ComplexEnergy energy_closed(int n, const Drive& d, const ShiftSolution& s, double t);

/// <E> by quadrature: the kinetic term uses an eighth-order centred second
/// difference, integrals use composite Simpson. Throws TruncationError when
/// the state has not decayed at the grid edges.
ComplexEnergy energy_quadrature(const GridState& state, const Drive& d);

/// <U_I> = 2 f(t) <x>.
double u_imag_expectation(const GridState& state, const Drive& d);

/// Simpson integral of |psi|^2.
double norm_sq(const GridState& state);

enum class EnergyMethod { closed, quadrature };

std::string_view to_string(EnergyMethod m);

struct ExpectationReport {
  ComplexEnergy energy;
  double u_imag;
  double norm_sq;
  EnergyMethod method;
};

/// Energy by the chosen method; <U_I> and the norm always come from the
/// sampled state.
ExpectationReport expectation_report(const ClosedFormState& s, const SpatialGrid& grid, double t,
                                     EnergyMethod method);

}  // namespace ptspec
