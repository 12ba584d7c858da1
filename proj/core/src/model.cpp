#include "ptspec/model.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "ptspec/errors.hpp"

namespace ptspec {

complex hermite_eval(int n, complex z, int n_max) {
  if (n < 0) throw InvalidArgument("hermite_eval: negative order " + std::to_string(n));
  if (n > n_max)
    throw CapabilityError("hermite_eval: order " + std::to_string(n) + " exceeds n_max " +
                          std::to_string(n_max));
  complex prev(1.0, 0.0);
  if (n == 0) return prev;
  complex cur = 2.0 * z;
  for (int k = 1; k < n; ++k) {
    complex next = 2.0 * z * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Drive

struct Drive::Spline {
  std::vector<double> times;
  std::vector<double> values;
  std::unique_ptr<gsl_spline, decltype(&gsl_spline_free)> spline{nullptr, &gsl_spline_free};

  // Returns t clamped onto the span; mesh points that overshoot the end by
  // rounding are accepted.
  double check(double t) const {
    const double slack = 1e-12 * std::max(1.0, times.back() - times.front());
    if (!(t >= times.front() - slack && t <= times.back() + slack))
      throw RangeError("sampled drive evaluated at t=" + std::to_string(t) + " outside [" +
                       std::to_string(times.front()) + ", " + std::to_string(times.back()) + "]");
    return std::clamp(t, times.front(), times.back());
  }

  // A null accelerator keeps evaluation free of shared mutable state.
  double eval(double t) const {
    t = check(t);
    double y = 0.0;
    gsl_spline_eval_e(spline.get(), t, nullptr, &y);
    return y;
  }
  double deriv(double t) const {
    t = check(t);
    double y = 0.0;
    gsl_spline_eval_deriv_e(spline.get(), t, nullptr, &y);
    return y;
  }
  double integ(double a, double b) const {
    a = check(a);
    b = check(b);
    if (a > b) return -integ(b, a);
    double y = 0.0;
    gsl_spline_eval_integ_e(spline.get(), a, b, nullptr, &y);
    return y;
  }
  double deriv2(double t) const {
    t = check(t);
    double y = 0.0;
    gsl_spline_eval_deriv2_e(spline.get(), t, nullptr, &y);
    return y;
  }
};

Drive Drive::constant(double f0) {
  if (!std::isfinite(f0)) throw InvalidArgument("constant drive must be finite");
  Drive d;
  d.kind_ = Kind::constant;
  d.poly_ = Polynomial::constant(f0);
  return d;
}

Drive Drive::polynomial(Polynomial p) {
  for (double c : p.coeffs())
    if (!std::isfinite(c)) throw InvalidArgument("polynomial drive coefficients must be finite");
  Drive d;
  d.kind_ = Kind::polynomial;
  d.poly_ = std::move(p);
  return d;
}

Drive Drive::sampled(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size())
    throw InvalidArgument("sampled drive: times and values differ in length");
  if (times.size() < 3) throw InvalidArgument("sampled drive needs at least 3 samples");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
      throw InvalidArgument("sampled drive: non-finite sample");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw InvalidArgument("sampled drive: times must be strictly increasing");
  }
  auto s = std::make_shared<Spline>();
  s->times = std::move(times);
  s->values = std::move(values);
  s->spline.reset(gsl_spline_alloc(gsl_interp_cspline, s->times.size()));
  if (!s->spline) throw Error("sampled drive: spline allocation failed");
  if (gsl_spline_init(s->spline.get(), s->times.data(), s->values.data(), s->times.size()) != GSL_SUCCESS)
    throw InvalidArgument("sampled drive: spline construction failed");
  Drive d;
  d.kind_ = Kind::sampled;
  d.spline_ = std::move(s);
  return d;
}

double Drive::operator()(double t) const { return spline_ ? spline_->eval(t) : poly_(t); }

double Drive::derivative(double t) const {
  return spline_ ? spline_->deriv(t) : poly_.derivative()(t);
}

double Drive::second_derivative(double t) const {
  return spline_ ? spline_->deriv2(t) : poly_.derivative().derivative()(t);
}

double Drive::integral(double a, double b) const {
  if (spline_) return spline_->integ(a, b);
  const Polynomial anti = poly_.antiderivative();
  return anti(b) - anti(a);
}

std::optional<Polynomial> Drive::as_polynomial() const {
  if (spline_) return std::nullopt;
  return poly_;
}

std::optional<bool> Drive::is_even_in_time() const {
  switch (kind_) {
    case Kind::constant: return true;
    case Kind::polynomial: return poly_.is_even();
    case Kind::sampled: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::pair<double, double>> Drive::span() const {
  if (!spline_) return std::nullopt;
  return std::make_pair(spline_->times.front(), spline_->times.back());
}

std::span<const double> Drive::sample_times() const {
  if (!spline_) return {};
  return spline_->times;
}

double Drive::max_abs(double t0, double t1) const {
  double m = 0.0;
  if (spline_) {
    for (std::size_t i = 0; i < spline_->times.size(); ++i)
      if (spline_->times[i] >= t0 && spline_->times[i] <= t1) m = std::max(m, std::abs(spline_->values[i]));
    return m;
  }
  constexpr int kSamples = 1000;
  for (int i = 0; i <= kSamples; ++i) m = std::max(m, std::abs(poly_(t0 + (t1 - t0) * i / kSamples)));
  return m;
}

double drive_eval(const Drive& d, double t) { return d(t); }

// ---------------------------------------------------------------------------
// Grid types

SpatialGrid::SpatialGrid(double x_min, double x_max, int n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
    throw InvalidArgument("grid requires finite x_min < x_max");
  if (n_points < 3) throw InvalidArgument("grid requires at least 3 points");
}

double SpatialGrid::x(int i) const {
  // Symmetric in floating point: node i and node N-1-i are exact negatives
  // whenever x_min == -x_max.
  const int last = n_points_ - 1;
  if (2 * i > last) return x_max_ - (x_max_ - x_min_) * (last - i) / last;
  return x_min_ + (x_max_ - x_min_) * i / last;
}

std::vector<double> SpatialGrid::nodes() const {
  std::vector<double> xs(static_cast<std::size_t>(n_points_));
  for (int i = 0; i < n_points_; ++i) xs[static_cast<std::size_t>(i)] = x(i);
  return xs;
}

bool SpatialGrid::is_symmetric() const { return x_min_ == -x_max_; }

GridState::GridState(SpatialGrid grid, double t, std::vector<complex> amplitudes, std::optional<int> n)
    : grid_(grid), t_(t), amplitudes_(std::move(amplitudes)), n_(n) {
  if (static_cast<int>(amplitudes_.size()) != grid_.size())
    throw InvalidArgument("grid state: amplitude count " + std::to_string(amplitudes_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  if (!std::isfinite(sum) || sum <= 0.0)
    throw InvalidArgument("grid state: norm must be finite and nonzero");
}

double GridState::max_abs() const {
  double m = 0.0;
  for (const auto& a : amplitudes_) m = std::max(m, std::abs(a));
  return m;
}

double GridState::endpoint_ratio() const {
  return std::max(std::abs(amplitudes_.front()), std::abs(amplitudes_.back())) / max_abs();
}

ComplexEnergy::ComplexEnergy(double re_, double im_) : re(re_), im(im_) {
  if (!std::isfinite(re) || !std::isfinite(im)) throw InvalidArgument("complex energy must be finite");
}

}  // namespace ptspec
