#include "ptspec/polynomial.hpp"

#include <algorithm>
#include <cstddef>

namespace ptspec {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Polynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (coeffs_.empty()) return {};
  std::vector<double> a(coeffs_.size() + 1, 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(a));
}

bool Polynomial::is_even() const {
  for (std::size_t k = 1; k < coeffs_.size(); k += 2)
    if (coeffs_[k] != 0.0) return false;
  return true;
}

bool Polynomial::is_odd() const {
  for (std::size_t k = 0; k < coeffs_.size(); k += 2)
    if (coeffs_[k] != 0.0) return false;
  return true;
}

Polynomial Polynomial::operator-() const { return -1.0 * *this; }

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c = p.coeffs_;
  for (auto& v : c) v *= s;
  return Polynomial(std::move(c));
}

}  // namespace ptspec
