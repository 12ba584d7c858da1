#include "ptspec/tdse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ptspec/errors.hpp"
#include "ptspec/observables.hpp"

namespace ptspec {

namespace {

constexpr complex kI{0.0, 1.0};
constexpr double kCompactOff = 1.0 / 12.0;
constexpr double kCompactDiag = 10.0 / 12.0;

double sum_norm(std::span<const complex> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

Potential drive_potential(const Drive& d) {
  return [d](double x, double t) { return complex(x * x, 2.0 * d(t) * x); };
}

long PropagationConfig::steps() const {
  if (!potential) throw InvalidArgument("propagation: potential is not set");
  if (!grid.is_symmetric()) throw InvalidArgument("propagation: grid must be symmetric");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("propagation: dt must be positive");
  const double ratio = std::abs(t1 - t0) / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("propagation: |t1 - t0| / dt = " + std::to_string(ratio) +
                          " is not a positive integer");
  return static_cast<long>(rounded);
}

void solve_tridiagonal(std::span<const complex> lower, std::span<const complex> diag,
                       std::span<const complex> upper, std::span<complex> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n)
    throw InvalidArgument("solve_tridiagonal: band lengths must match the right-hand side");
  std::vector<complex> c_prime(n);
  complex pivot = diag[0];
  if (pivot == 0.0) throw InvalidArgument("solve_tridiagonal: zero pivot at row 0");
  c_prime[0] = upper[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c_prime[i - 1];
    if (pivot == 0.0) throw InvalidArgument("solve_tridiagonal: zero pivot at row " + std::to_string(i));
    c_prime[i] = upper[i] / pivot;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c_prime[i] * rhs[i + 1];
}

GridState crank_nicolson_propagate(const GridState& initial, const PropagationConfig& cfg) {
  return crank_nicolson_propagate(initial, cfg, nullptr, 1);
}

GridState crank_nicolson_propagate(const GridState& initial, const PropagationConfig& cfg,
                                   const StepObserver& observer, long every) {
  const long steps = cfg.steps();
  if (!(initial.grid() == cfg.grid)) throw InvalidArgument("propagation: initial state grid differs from config");
  if (std::abs(initial.t() - cfg.t0) > 1e-12 * std::max(1.0, std::abs(cfg.t0)))
    throw InvalidArgument("propagation: initial state time differs from t0");
  if (every < 1) throw InvalidArgument("propagation: observer interval must be >= 1");
  if (!(initial.endpoint_ratio() < 1e-12))
    throw TruncationError("propagation: initial state has not decayed at the grid edges");

  const SpatialGrid& grid = cfg.grid;
  const int n = grid.size();
  const auto m = static_cast<std::size_t>(n - 2);
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double step = (cfg.t1 >= cfg.t0) ? cfg.dt : -cfg.dt;
  const complex half = 0.5 * kI * step;

  std::vector<double> x(m);
  for (std::size_t k = 0; k < m; ++k) x[k] = grid.x(static_cast<int>(k) + 1);
  std::vector<complex> psi(initial.amplitudes().begin() + 1, initial.amplitudes().end() - 1);

  const double norm0 = sum_norm(psi);
  std::vector<complex> v(m), lower(m), diag(m), upper(m), rhs(m);

  auto snapshot = [&](double t) {
    std::vector<complex> full(static_cast<std::size_t>(n), complex{});
    std::copy(psi.begin(), psi.end(), full.begin() + 1);
    return GridState(grid, t, std::move(full), initial.n());
  };

  if (observer) observer(snapshot(cfg.t0));

  for (long s = 0; s < steps; ++s) {
    const double t_mid = cfg.t0 + (static_cast<double>(s) + 0.5) * step;
    for (std::size_t k = 0; k < m; ++k) v[k] = cfg.potential(x[k], t_mid);

    for (std::size_t k = 0; k < m; ++k) {
      // Rows of A = -D + B V on the interior; Dirichlet nodes are zero.
      const complex a_lo = k > 0 ? -inv_h2 + kCompactOff * v[k - 1] : complex{};
      const complex a_di = 2.0 * inv_h2 + kCompactDiag * v[k];
      const complex a_up = k + 1 < m ? -inv_h2 + kCompactOff * v[k + 1] : complex{};
      const complex p_lo = k > 0 ? psi[k - 1] : complex{};
      const complex p_up = k + 1 < m ? psi[k + 1] : complex{};

      const complex b_psi = kCompactOff * (p_lo + p_up) + kCompactDiag * psi[k];
      const complex a_psi = a_lo * p_lo + a_di * psi[k] + a_up * p_up;
      rhs[k] = b_psi - half * a_psi;
      lower[k] = kCompactOff + half * a_lo;
      diag[k] = kCompactDiag + half * a_di;
      upper[k] = kCompactOff + half * a_up;
    }
    solve_tridiagonal(lower, diag, upper, rhs);
    psi.swap(rhs);

    const double t_now = (s + 1 == steps) ? cfg.t1 : cfg.t0 + static_cast<double>(s + 1) * step;
    const double norm = sum_norm(psi);
    if (!std::isfinite(norm))
      throw DivergenceError("propagation: non-finite amplitudes at t=" + std::to_string(t_now));
    if (norm > kMaxNormGrowth * norm0)
      throw DivergenceError("propagation: norm grew by more than 1e12 at t=" + std::to_string(t_now));
    double peak = 0.0;
    for (const auto& a : psi) peak = std::max(peak, std::abs(a));
    const double edge = std::max(std::abs(psi.front()), std::abs(psi.back()));
    if (edge > cfg.reflection_threshold * peak)
      throw ReflectionError("propagation: boundary amplitude ratio " + sci(edge / peak) + " exceeds " +
                            sci(cfg.reflection_threshold) + " at t=" + std::to_string(t_now) + "; widen the grid");

    if (observer && ((s + 1) % every == 0 || s + 1 == steps)) observer(snapshot(t_now));
  }
  return snapshot(cfg.t1);
}

std::vector<NormSample> norm_trajectory(const GridState& initial, const PropagationConfig& cfg,
                                        long sample_every) {
  std::vector<NormSample> out;
  crank_nicolson_propagate(
      initial, cfg, [&out](const GridState& s) { out.push_back({s.t(), norm_sq(s)}); }, sample_every);
  return out;
}

}  // namespace ptspec
