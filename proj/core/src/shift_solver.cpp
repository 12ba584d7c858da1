#include "ptspec/shift_solver.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <cmath>
#include <string>

#include "ptspec/errors.hpp"

namespace ptspec {

namespace detail {

CubicHermiteTable::CubicHermiteTable(double t0, double step, std::vector<double> values,
                                     std::vector<double> slopes)
    : t0_(t0), step_(step), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (values_.size() < 2 || values_.size() != slopes_.size() || !(step_ > 0.0))
    throw InvalidArgument("cubic Hermite table needs >= 2 nodes, matching slopes and a positive step");
}

double CubicHermiteTable::operator()(double t) const {
  const double end = t_end();
  // Tolerate rounding in the last mesh point.
  const double slack = 1e-12 * std::max(1.0, std::abs(end - t0_));
  if (!(t >= t0_ - slack && t <= end + slack))
    throw RangeError("trajectory evaluated at t=" + std::to_string(t) + " outside [" + std::to_string(t0_) +
                     ", " + std::to_string(end) + "]");
  const std::size_t last = values_.size() - 1;
  double u = (t - t0_) / step_;
  std::size_t k = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(last - 1)));
  double s = u - static_cast<double>(k);
  double s2 = s * s, s3 = s2 * s;
  double h00 = 2 * s3 - 3 * s2 + 1;
  double h10 = s3 - 2 * s2 + s;
  double h01 = -2 * s3 + 3 * s2;
  double h11 = s3 - s2;
  return h00 * values_[k] + h10 * step_ * slopes_[k] + h01 * values_[k + 1] + h11 * step_ * slopes_[k + 1];
}

}  // namespace detail

// ---------------------------------------------------------------------------

ShiftSolution ShiftSolution::analytic(Polynomial g) {
  ShiftSolution s;
  s.kind_ = Kind::analytic_polynomial;
  s.poly_ = std::move(g);
  return s;
}

ShiftSolution ShiftSolution::numeric(double t0, double step, std::vector<double> g, std::vector<double> gdot,
                                     std::vector<double> gddot) {
  ShiftSolution s;
  s.kind_ = Kind::numeric_trajectory;
  auto gdot_copy = gdot;
  s.g_ = std::make_shared<const detail::CubicHermiteTable>(t0, step, std::move(g), std::move(gdot_copy));
  s.gdot_ = std::make_shared<const detail::CubicHermiteTable>(t0, step, std::move(gdot), std::move(gddot));
  return s;
}

double ShiftSolution::g(double t) const { return poly_ ? (*poly_)(t) : (*g_)(t); }

double ShiftSolution::gdot(double t) const { return poly_ ? poly_->derivative()(t) : (*gdot_)(t); }

std::optional<std::pair<double, double>> ShiftSolution::span() const {
  if (poly_) return std::nullopt;
  return std::make_pair(g_->t_begin(), g_->t_end());
}

PhaseIntegral PhaseIntegral::analytic(Polynomial theta) {
  PhaseIntegral p;
  p.kind_ = Kind::analytic_polynomial;
  const double at_zero = theta(0.0);
  p.poly_ = std::move(theta) - Polynomial::constant(at_zero);
  return p;
}

PhaseIntegral PhaseIntegral::numeric(detail::CubicHermiteTable cumulative) {
  if (!(cumulative.t_begin() <= 0.0 && cumulative.t_end() >= 0.0))
    throw RangeError("phase integral: the trajectory span [" + std::to_string(cumulative.t_begin()) + ", " +
                     std::to_string(cumulative.t_end()) + "] does not contain t = 0");
  PhaseIntegral p;
  p.kind_ = Kind::numeric_cumulative;
  p.offset_ = cumulative(0.0);
  p.table_ = std::make_shared<const detail::CubicHermiteTable>(std::move(cumulative));
  return p;
}

double PhaseIntegral::operator()(double t) const { return poly_ ? (*poly_)(t) : (*table_)(t) - offset_; }

// ---------------------------------------------------------------------------

ShiftSolution solve_shift_analytic(const Drive& d) {
  auto f = d.as_polynomial();
  if (!f) throw InvalidArgument("solve_shift_analytic: drive must be constant or polynomial");
  // Each pass differentiates twice, so the iteration is exact after
  // degree/2 + 1 passes.
  Polynomial g = *f;
  for (int pass = 0; pass <= f->degree() / 2 + 1; ++pass) {
    Polynomial next = *f - 0.25 * g.derivative().derivative();
    if (next == g) break;
    g = std::move(next);
  }
  return ShiftSolution::analytic(std::move(g));
}

ShiftSolution solve_shift_numeric(const Drive& d, double t0, double t1, ShiftInit init, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("solve_shift_numeric: dt must be positive");
  if (!(t0 < t1)) throw InvalidArgument("solve_shift_numeric: requires t0 < t1");
  if (auto span = d.span(); span && (t0 < span->first || t1 > span->second))
    throw RangeError("solve_shift_numeric: [t0, t1] leaves the sampled drive span");

  const auto steps = static_cast<std::size_t>(std::max(2.0, std::ceil((t1 - t0) / dt - 1e-9)));
  const double h = (t1 - t0) / static_cast<double>(steps);

  using State = std::array<double, 2>;
  auto rhs = [&d](const State& y, State& dydt, double t) {
    dydt[0] = y[1];
    dydt[1] = 4.0 * (d(t) - y[0]);
  };
  boost::numeric::odeint::runge_kutta4<State> stepper;

  std::vector<double> g(steps + 1), gdot(steps + 1), gddot(steps + 1);
  State y{init.g0, init.gdot0};
  for (std::size_t k = 0;; ++k) {
    // Mesh times are recomputed from t0 to avoid drift.
    const double t = t0 + h * static_cast<double>(k);
    const double tk = (k == steps) ? t1 : t;
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      throw DivergenceError("solve_shift_numeric: non-finite state at t=" + std::to_string(tk));
    g[k] = y[0];
    gdot[k] = y[1];
    gddot[k] = 4.0 * (d(tk) - y[0]);
    if (k == steps) break;
    stepper.do_step(rhs, y, t, h);
  }
  return ShiftSolution::numeric(t0, h, std::move(g), std::move(gdot), std::move(gddot));
}

namespace {

double check_span_max_f(const Drive& d, const ShiftSolution& s) {
  if (auto span = s.span()) return d.max_abs(span->first, span->second);
  if (auto span = d.span()) return d.max_abs(span->first, span->second);
  return d.max_abs(-10.0, 10.0);
}

}  // namespace

double shift_residual(const Drive& d, const ShiftSolution& s) {
  if (const auto& g = s.polynomial()) {
    if (auto f = d.as_polynomial()) {
      Polynomial r = g->derivative().derivative() + 4.0 * *g - 4.0 * *f;
      if (r.is_zero()) return 0.0;
      double m = 0.0;
      for (int i = 0; i <= 200; ++i) m = std::max(m, std::abs(r(-10.0 + 0.1 * i)));
      return m;
    }
    double m = 0.0;
    const Polynomial gdd = g->derivative().derivative();
    for (double t : d.sample_times()) m = std::max(m, std::abs(gdd(t) + 4.0 * (*g)(t) - 4.0 * d(t)));
    return m;
  }

  // Weak form over [t_{k-1}, t_{k+1}]:
  //   gdot(t+) - gdot(t-) + 4 int g - 4 int f  ==  2h * mean(gddot + 4g - 4f),
  // with f integrated exactly and g by Simpson. Unlike a pointwise stencil on
  // gdot this stays accurate across the knots of a sampled drive.
  const auto& g = *s.g_table();
  const auto& gv = g.values();
  const auto& gdv = s.gdot_table()->values();
  const double h = g.step();
  double m = 0.0;
  for (std::size_t k = 1; k + 1 < gv.size(); ++k) {
    const double int_g = h / 3.0 * (gv[k - 1] + 4.0 * gv[k] + gv[k + 1]);
    const double int_f = d.integral(g.time(k - 1), g.time(k + 1));
    const double defect = gdv[k + 1] - gdv[k - 1] + 4.0 * int_g - 4.0 * int_f;
    m = std::max(m, std::abs(defect) / (2.0 * h));
  }
  return m;
}

double shift_residual_bound(const Drive& d, const ShiftSolution& s) {
  return kShiftResidualTolerance * (1.0 + check_span_max_f(d, s));
}

PhaseIntegral phase_integral(const Drive& d, const ShiftSolution& s) {
  const double residual = shift_residual(d, s);
  const double bound = shift_residual_bound(d, s);
  if (!(residual <= bound))
    throw ConsistencyError("phase_integral: shift solution does not solve gddot + 4g = 4f for this drive "
                           "(residual " + std::to_string(residual) + " > " + std::to_string(bound) + ")");

  if (s.polynomial() && d.as_polynomial()) {
    const Polynomial& g = *s.polynomial();
    const Polynomial f = *d.as_polynomial();
    const Polynomial gd = g.derivative();
    Polynomial integrand = (2.0 * f - g) * g + 0.25 * (gd * gd);
    return PhaseIntegral::analytic(integrand.antiderivative());
  }
  if (s.polynomial())
    throw ConsistencyError("phase_integral: analytic shift paired with a sampled drive; solve numerically");

  const auto& g = *s.g_table();
  const auto& gd = *s.gdot_table();
  const std::size_t n = g.values().size();
  const double h = g.step();
  std::vector<double> q(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double gk = g.values()[k], gdk = gd.values()[k];
    q[k] = (2.0 * d(g.time(k)) - gk) * gk + 0.25 * gdk * gdk;
  }
  // Composite Simpson at even nodes; odd nodes add one panel of the local
  // quadratic through three neighbouring samples.
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    if (k % 2 == 0) {
      c[k] = c[k - 2] + h / 3.0 * (q[k - 2] + 4.0 * q[k - 1] + q[k]);
    } else if (k + 1 < n) {
      c[k] = c[k - 1] + h / 12.0 * (5.0 * q[k - 1] + 8.0 * q[k] - q[k + 1]);
    } else {
      c[k] = c[k - 1] + h / 12.0 * (-q[k - 2] + 8.0 * q[k - 1] + 5.0 * q[k]);
    }
  }
  return PhaseIntegral::numeric(detail::CubicHermiteTable(g.t_begin(), h, std::move(c), std::move(q)));
}

}  // namespace ptspec
