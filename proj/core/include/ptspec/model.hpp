#pragma once

// Domain types shared across the library: the drive f(t), the spatial grid,
// sampled wavefunctions and complex energies, plus Hermite polynomials at
// complex argument.

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ptspec/polynomial.hpp"

namespace ptspec {

using complex = std::complex<double>;

inline constexpr int kHermiteMaxOrder = 64;

/// Physicists' Hermite polynomial H_n(z), built by the three-term recurrence
/// from H_0 = 1, H_1 = 2z. Throws CapabilityError when n > n_max.
complex hermite_eval(int n, complex z, int n_max = kHermiteMaxOrder);

/// Real-valued drive f(t) multiplying the imaginary potential 2i f(t) x.
///
/// Three representations: a constant, a polynomial in t, or samples joined by
/// a natural cubic spline. Sampled drives can only be evaluated inside their
/// sample span. Copies share the immutable sample data.
class Drive {
 public:
  enum class Kind { constant, polynomial, sampled };

  static Drive constant(double f0);
  static Drive polynomial(Polynomial p);
  /// Requires at least three strictly increasing times.
  static Drive sampled(std::vector<double> times, std::vector<double> values);

  Kind kind() const { return kind_; }

  double operator()(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;
  /// Exact integral of f over [a, b] (the spline integral for sampled drives).
  double integral(double a, double b) const;

  /// Polynomial form for constant and polynomial drives; empty for sampled.
  std::optional<Polynomial> as_polynomial() const;

  /// Exact parity decision for constant and polynomial drives; empty for
  /// sampled drives, whose parity has to be measured.
  std::optional<bool> is_even_in_time() const;

  /// Sample span; empty for drives defined on the whole real line.
  std::optional<std::pair<double, double>> span() const;

  /// Sample times for sampled drives, empty otherwise.
  std::span<const double> sample_times() const;

  /// Largest |f| over the sample points (sampled) or over [t0, t1].
  double max_abs(double t0, double t1) const;

 private:
  struct Spline;

  Drive() = default;

  Kind kind_ = Kind::constant;
  Polynomial poly_;
  std::shared_ptr<const Spline> spline_;
};

/// f(t); throws RangeError outside the span of a sampled drive.
double drive_eval(const Drive& d, double t);

/// Uniform grid on [x_min, x_max] with n_points nodes.
class SpatialGrid {
 public:
  SpatialGrid(double x_min, double x_max, int n_points);

  /// Symmetric grid [-half_width, half_width] with the given node count.
  static SpatialGrid symmetric(double half_width, int n_points) {
    return SpatialGrid(-half_width, half_width, n_points);
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int size() const { return n_points_; }
  double spacing() const { return (x_max_ - x_min_) / (n_points_ - 1); }
  double x(int i) const;
  std::vector<double> nodes() const;

  bool is_symmetric() const;

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  double x_min_;
  double x_max_;
  int n_points_;
};

/// Complex amplitudes on a grid at one instant. Amplitudes are stored raw;
/// anything normalized divides by the grid norm.
class GridState {
 public:
  GridState(SpatialGrid grid, double t, std::vector<complex> amplitudes,
            std::optional<int> n = std::nullopt);

  const SpatialGrid& grid() const { return grid_; }
  double t() const { return t_; }
  std::span<const complex> amplitudes() const { return amplitudes_; }
  std::optional<int> n() const { return n_; }

  /// Largest |psi| over the grid.
  double max_abs() const;
  /// max(|psi(x_min)|, |psi(x_max)|) / max|psi|.
  double endpoint_ratio() const;

 private:
  SpatialGrid grid_;
  double t_;
  std::vector<complex> amplitudes_;
  std::optional<int> n_;
};

struct ComplexEnergy {
  double re = 0.0;
  double im = 0.0;

  ComplexEnergy() = default;
  ComplexEnergy(double re_, double im_);
  explicit ComplexEnergy(complex z) : ComplexEnergy(z.real(), z.imag()) {}

  complex value() const { return {re, im}; }
};

}  // namespace ptspec
