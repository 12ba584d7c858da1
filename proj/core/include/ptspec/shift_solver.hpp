#pragma once

// Auxiliary system for the imaginary coordinate shift z = x + i g(t):
//
//   alpha = gdot / 2,   alphadot = 2 (f - g)   <=>   gddot + 4 g = 4 f
//
// and the accumulated phase theta(t) = int_0^t [(2f - g) g + gdot^2 / 4] dt'.

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ptspec/model.hpp"
#include "ptspec/polynomial.hpp"

namespace ptspec {

inline constexpr double kDefaultOdeStep = 1e-3;
/// Residual bound for |gddot + 4g - 4f|, scaled by (1 + max|f|).
inline constexpr double kShiftResidualTolerance = 1e-9;

namespace detail {

/// Values and first derivatives on a uniform mesh, joined by cubic Hermite
/// segments.
class CubicHermiteTable {
 public:
  CubicHermiteTable(double t0, double step, std::vector<double> values, std::vector<double> slopes);

  double operator()(double t) const;
  double t_begin() const { return t0_; }
  double t_end() const { return t0_ + step_ * static_cast<double>(values_.size() - 1); }
  double step() const { return step_; }
  double time(std::size_t k) const { return t0_ + step_ * static_cast<double>(k); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& slopes() const { return slopes_; }

 private:
  double t0_;
  double step_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace detail

/// Initial data (g, gdot) at the start of a numeric span.
struct ShiftInit {
  double g0 = 0.0;
  double gdot0 = 0.0;
};

/// The pair (g, alpha) solving the auxiliary system, either as an exact
/// polynomial or as an RK4 trajectory with dense output.
class ShiftSolution {
 public:
  enum class Kind { analytic_polynomial, numeric_trajectory };

  static ShiftSolution analytic(Polynomial g);
  /// Trajectory on a uniform mesh: g, gdot and gddot at every node.
  static ShiftSolution numeric(double t0, double step, std::vector<double> g, std::vector<double> gdot,
                               std::vector<double> gddot);

  Kind kind() const { return kind_; }

  double g(double t) const;
  double gdot(double t) const;
  double alpha(double t) const { return 0.5 * gdot(t); }

  /// Exact polynomial g for analytic solutions.
  const std::optional<Polynomial>& polynomial() const { return poly_; }
  /// Integration span for numeric solutions.
  std::optional<std::pair<double, double>> span() const;
  /// Mesh data for numeric solutions (g with slope gdot, gdot with slope gddot).
  const detail::CubicHermiteTable* g_table() const { return g_.get(); }
  const detail::CubicHermiteTable* gdot_table() const { return gdot_.get(); }

 private:
  ShiftSolution() = default;

  Kind kind_ = Kind::analytic_polynomial;
  std::optional<Polynomial> poly_;
  std::shared_ptr<const detail::CubicHermiteTable> g_;
  std::shared_ptr<const detail::CubicHermiteTable> gdot_;
};

/// theta(t) = int_0^t [(2f - g) g + gdot^2 / 4] dt', with theta(0) = 0.
class PhaseIntegral {
 public:
  enum class Kind { analytic_polynomial, numeric_cumulative };

  static PhaseIntegral analytic(Polynomial theta);
  /// Cumulative integral on a mesh; shifted so that theta(0) = 0.
  static PhaseIntegral numeric(detail::CubicHermiteTable cumulative);

  Kind kind() const { return kind_; }
  double operator()(double t) const;
  const std::optional<Polynomial>& polynomial() const { return poly_; }

 private:
  PhaseIntegral() = default;

  Kind kind_ = Kind::analytic_polynomial;
  std::optional<Polynomial> poly_;
  std::shared_ptr<const detail::CubicHermiteTable> table_;
  double offset_ = 0.0;
};

/// Polynomial particular solution of gddot + 4g = 4f for constant and
/// polynomial drives, via the fixed point g <- f - gddot/4 seeded with g = f.
/// No homogeneous cos(2t)/sin(2t) part is added.
ShiftSolution solve_shift_analytic(const Drive& d);

/// Classic RK4 on (g, gdot) over [t0, t1] starting from `init` at t0. The
/// step is shrunk so that it divides the span evenly. Throws DivergenceError
/// on non-finite values.
ShiftSolution solve_shift_numeric(const Drive& d, double t0, double t1, ShiftInit init,
                                  double dt = kDefaultOdeStep);

/// max |gddot + 4g - 4f|. Exact for polynomial pairs. For trajectories it is
/// the mean of the residual over each pair of adjacent mesh steps, from the
/// stored gdot and the exact integral of f.
double shift_residual(const Drive& d, const ShiftSolution& s);

/// Residual bound kShiftResidualTolerance * (1 + max|f|) over the solution's span.
double shift_residual_bound(const Drive& d, const ShiftSolution& s);

/// Analytic antiderivative when both inputs are polynomial; cumulative
/// Simpson on the trajectory mesh otherwise. Throws ConsistencyError when `s`
/// does not solve the auxiliary ODE for `d`, RangeError when t = 0 lies
/// outside a numeric span.
PhaseIntegral phase_integral(const Drive& d, const ShiftSolution& s);

}  // namespace ptspec
