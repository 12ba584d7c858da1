#include "ptspec/observables.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ptspec/errors.hpp"

namespace ptspec {

namespace {

template <typename T>
T simpson_impl(std::span<const T> y, double h) {
  const std::size_t n = y.size();
  if (n < 3) throw InvalidArgument("simpson: need at least 3 samples");
  // Simpson over the first m samples (m odd), 3/8 rule for a trailing 4-point
  // panel when n is even.
  const std::size_t m = (n % 2 == 1) ? n : n - 3;
  T acc{};
  if (m >= 3) {
    T odd{}, even{};
    for (std::size_t k = 1; k + 1 < m; k += 2) odd += y[k];
    for (std::size_t k = 2; k + 1 < m; k += 2) even += y[k];
    acc = h / 3.0 * (y[0] + y[m - 1] + 4.0 * odd + 2.0 * even);
  }
  if (m != n) {
    const std::size_t b = n - 4;
    acc += 3.0 * h / 8.0 * (y[b] + 3.0 * y[b + 1] + 3.0 * y[b + 2] + y[b + 3]);
  }
  return acc;
}

// Centred eighth-order weights for the second derivative (half-width 4).
constexpr std::array<double, 5> kD2Weights{-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
constexpr int kD2Half = 4;

void require_decay(const GridState& state, const char* who) {
  const double ratio = state.endpoint_ratio();
  if (!(ratio < kEndpointDecay))
    throw TruncationError(std::string(who) + ": endpoint amplitude ratio " + std::to_string(ratio) +
                          " >= 1e-12; widen the grid");
}

}  // namespace

double simpson(std::span<const double> y, double h) { return simpson_impl(y, h); }

complex simpson(std::span<const complex> y, double h) { return simpson_impl(y, h); }

ComplexEnergy energy_closed(int n, const Drive& d, const ShiftSolution& s, double t) {
  const double f = d(t);
  const double g = s.g(t);
  const double a = s.alpha(t);
  const double g2 = g * g, a2 = a * a;
  switch (n) {
    case 0: return {1.0 + g2 + a2, 2.0 * a * f};
    case 1: {
      const double e11 = 3.0 + 7.0 * (g2 + a2) + 4.0 * a2 * g2 + 2.0 * (a2 * a2 + g2 * g2);
      const double denom = 1.0 + 2.0 * g2 + 2.0 * a2;
      return {e11 / denom, 2.0 * a * f * (3.0 + 2.0 * a2 + 2.0 * g2) / denom};
    }
    default:
      throw CapabilityError("energy_closed: no closed form for n=" + std::to_string(n) +
                            "; use the quadrature method");
  }
}

double norm_sq(const GridState& state) {
  std::vector<double> mod2;
  mod2.reserve(state.amplitudes().size());
  for (const auto& a : state.amplitudes()) mod2.push_back(std::norm(a));
  return simpson(mod2, state.grid().spacing());
}

ComplexEnergy energy_quadrature(const GridState& state, const Drive& d) {
  require_decay(state, "energy_quadrature");
  const auto psi = state.amplitudes();
  const int n = static_cast<int>(psi.size());
  if (n < 2 * kD2Half + 3) throw InvalidArgument("energy_quadrature: grid too small for the stencil");
  const double h = state.grid().spacing();
  const double f = d(state.t());

  // Nodes within the stencil half-width of an edge carry amplitudes below
  // the decay threshold; their contribution is dropped.
  std::vector<complex> integrand(psi.size(), complex{});
  for (int i = kD2Half; i < n - kD2Half; ++i) {
    complex d2 = kD2Weights[0] * psi[static_cast<std::size_t>(i)];
    for (int j = 1; j <= kD2Half; ++j)
      d2 += kD2Weights[static_cast<std::size_t>(j)] *
            (psi[static_cast<std::size_t>(i + j)] + psi[static_cast<std::size_t>(i - j)]);
    d2 /= h * h;
    const double x = state.grid().x(i);
    const complex h_psi = -d2 + complex(x * x, 2.0 * f * x) * psi[static_cast<std::size_t>(i)];
    integrand[static_cast<std::size_t>(i)] = std::conj(psi[static_cast<std::size_t>(i)]) * h_psi;
  }
  return ComplexEnergy(simpson(std::span<const complex>(integrand), h) / norm_sq(state));
}

double u_imag_expectation(const GridState& state, const Drive& d) {
  require_decay(state, "u_imag_expectation");
  const auto psi = state.amplitudes();
  std::vector<complex> integrand(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double x = state.grid().x(static_cast<int>(k));
    integrand[k] = std::conj(psi[k]) * x * psi[k];
  }
  const double norm = norm_sq(state);
  const complex mean_x = simpson(std::span<const complex>(integrand), state.grid().spacing()) / norm;
  if (std::abs(mean_x.imag()) > 1e-10 * std::max(1.0, std::abs(mean_x.real())))
    throw Error("u_imag_expectation: <x> has imaginary part " + std::to_string(mean_x.imag()));
  return 2.0 * d(state.t()) * mean_x.real();
}

std::string_view to_string(EnergyMethod m) {
  switch (m) {
    case EnergyMethod::closed: return "closed";
    case EnergyMethod::quadrature: return "quadrature";
  }
  return "unknown";
}

ExpectationReport expectation_report(const ClosedFormState& s, const SpatialGrid& grid, double t,
                                     EnergyMethod method) {
  const GridState state = psi_sample(s, grid, t);
  ExpectationReport r{};
  r.method = method;
  r.energy = method == EnergyMethod::closed ? energy_closed(s.n(), s.drive(), s.shift(), t)
                                            : energy_quadrature(state, s.drive());
  r.u_imag = u_imag_expectation(state, s.drive());
  r.norm_sq = norm_sq(state);
  return r;
}

}  // namespace ptspec
