#pragma once

#include <initializer_list>
#include <vector>

namespace ptspec {

/// Real polynomial in t, stored by ascending power. Trailing zero
/// coefficients are trimmed so that equality is structural.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::vector<double> coeffs);  // NOLINT(google-explicit-constructor)
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial constant(double c) { return Polynomial({c}); }

  double operator()(double t) const;

  Polynomial derivative() const;
  /// Antiderivative with zero constant term, so it vanishes at t = 0.
  Polynomial antiderivative() const;

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_even() const;
  bool is_odd() const;

  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(int k) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();

  std::vector<double> coeffs_;
};

}  // namespace ptspec
