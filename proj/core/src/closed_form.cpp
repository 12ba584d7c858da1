#include "ptspec/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ptspec/errors.hpp"

namespace ptspec {

namespace {

constexpr complex kI{0.0, 1.0};

void require_symmetric(const SpatialGrid& grid, const char* who) {
  if (!grid.is_symmetric())
    throw InvalidArgument(std::string(who) + ": requires a grid symmetric about x = 0");
}

}  // namespace

ClosedFormState::ClosedFormState(int n, Drive drive, ShiftSolution shift)
    : n_(n), drive_(std::move(drive)), shift_(std::move(shift)), phase_(phase_integral(drive_, shift_)) {
  if (n < 0) throw InvalidArgument("closed-form state: n must be non-negative");
  if (n > kHermiteMaxOrder)
    throw CapabilityError("closed-form state: n=" + std::to_string(n) + " exceeds n_max " +
                          std::to_string(kHermiteMaxOrder));
}

ClosedFormState ClosedFormState::analytic(int n, const Drive& drive) {
  return ClosedFormState(n, drive, solve_shift_analytic(drive));
}

complex psi_eval(const ClosedFormState& s, double x, double t) {
  const double g = s.shift().g(t);
  const double alpha = s.shift().alpha(t);
  const double theta = s.phase()(t);
  const complex z{x, g};
  // One exponential so that the Gaussian decay and the e^{g^2/2} growth
  // cancel before exponentiation.
  const complex exponent = -kI * (s.level() * t + theta) + alpha * z - 0.5 * z * z;
  return std::exp(exponent) * hermite_eval(s.n(), z);
}

GridState psi_sample(const ClosedFormState& s, const SpatialGrid& grid, double t) {
  std::vector<complex> amps(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) amps[static_cast<std::size_t>(i)] = psi_eval(s, grid.x(i), t);
  GridState state(grid, t, std::move(amps), s.n());
  const double ratio = state.endpoint_ratio();
  if (!(ratio < kEndpointDecay))
    throw TruncationError("psi_sample: endpoint amplitude ratio " + std::to_string(ratio) +
                          " >= 1e-12 on [" + std::to_string(grid.x_min()) + ", " + std::to_string(grid.x_max()) +
                          "] at t=" + std::to_string(t) + "; widen the grid");
  return state;
}

double pde_residual(const ClosedFormState& s, const SpatialGrid& grid, double t, double dt_fd) {
  if (!(dt_fd > 0.0)) throw InvalidArgument("pde_residual: dt_fd must be positive");
  if (grid.size() < 5) throw InvalidArgument("pde_residual: grid needs at least 5 points");
  const int n = grid.size();
  const double h = grid.spacing();
  const double f = s.drive()(t);

  std::vector<complex> now(static_cast<std::size_t>(n)), before(now.size()), after(now.size());
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    now[static_cast<std::size_t>(i)] = psi_eval(s, x, t);
    before[static_cast<std::size_t>(i)] = psi_eval(s, x, t - dt_fd);
    after[static_cast<std::size_t>(i)] = psi_eval(s, x, t + dt_fd);
  }

  double res2 = 0.0, norm2 = 0.0;
  for (int i = 2; i < n - 2; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double x = grid.x(i);
    const complex dt_psi = (after[k] - before[k]) / (2.0 * dt_fd);
    const complex dxx_psi = (now[k + 1] - 2.0 * now[k] + now[k - 1]) / (h * h);
    const complex r = kI * dt_psi + dxx_psi - complex(x * x, 2.0 * f * x) * now[k];
    res2 += std::norm(r);
    norm2 += std::norm(now[k]);
  }
  return std::sqrt(res2 / norm2);
}

bool pt_check_hamiltonian(const Drive& d) {
  if (auto exact = d.is_even_in_time()) return *exact;
  const auto span = d.span();
  const double scale = std::max(std::abs(span->first), std::abs(span->second));
  if (std::abs(span->first + span->second) > 1e-12 * std::max(1.0, scale))
    throw UndecidableError("pt_check_hamiltonian: sampled span [" + std::to_string(span->first) + ", " +
                           std::to_string(span->second) + "] is not symmetric about t = 0");
  double defect = 0.0;
  for (double t : d.sample_times()) defect = std::max(defect, std::abs(d(-t) - d(t)));
  return defect <= 1e-10;
}

PtStateReport pt_check_state(const ClosedFormState& s, const SpatialGrid& grid, double t) {
  require_symmetric(grid, "pt_check_state");
  if (!pt_check_hamiltonian(s.drive()))
    throw NotApplicableError("pt_check_state: drive is not even in time, so H is not PT symmetric");

  const int n = grid.size();
  std::vector<complex> psi(static_cast<std::size_t>(n)), pt(psi.size());
  for (int i = 0; i < n; ++i) {
    psi[static_cast<std::size_t>(i)] = psi_eval(s, grid.x(i), t);
    pt[static_cast<std::size_t>(i)] = std::conj(psi_eval(s, grid.x(n - 1 - i), -t));
  }
  complex overlap{0.0, 0.0};
  double norm2 = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    overlap += std::conj(psi[k]) * pt[k];
    norm2 += std::norm(psi[k]);
  }
  const complex lambda = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : complex{1.0, 0.0};
  double dev2 = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) dev2 += std::norm(pt[k] - lambda * psi[k]);
  return {std::sqrt(dev2 / norm2), lambda};
}

ParityReport parity_condition_check(const ClosedFormState& s, const SpatialGrid& grid, double t) {
  require_symmetric(grid, "parity_condition_check");
  const int n = grid.size();
  const double f = s.drive()(t);

  std::vector<double> u(static_cast<std::size_t>(n)), mod2(u.size());
  for (int i = 0; i < n; ++i) {
    u[static_cast<std::size_t>(i)] = 2.0 * f * grid.x(i);
    mod2[static_cast<std::size_t>(i)] = std::norm(psi_eval(s, grid.x(i), t));
  }
  double u_max = 0.0, u_def = 0.0, m_max = 0.0, m_def = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i), mirror = static_cast<std::size_t>(n - 1 - i);
    u_max = std::max(u_max, std::abs(u[k]));
    u_def = std::max(u_def, std::abs(u[mirror] + u[k]));
    m_max = std::max(m_max, mod2[k]);
    m_def = std::max(m_def, std::abs(mod2[mirror] - mod2[k]));
  }
  ParityReport r{};
  r.uimag_odd_defect = u_max > 0.0 ? u_def / u_max : 0.0;
  r.modulus_even_defect = m_max > 0.0 ? m_def / m_max : 0.0;
  r.satisfied = r.uimag_odd_defect <= kParityTolerance && r.modulus_even_defect <= kParityTolerance;
  return r;
}

SpatialGrid recommended_grid(const ShiftSolution& shift, double t, double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("recommended_grid: spacing must be positive");
  const double reach = std::abs(shift.g(t)) + std::abs(shift.alpha(t)) + 10.0;
  const double half = std::max(12.0, std::ceil(reach));
  auto intervals = static_cast<int>(std::ceil(2.0 * half / spacing - 1e-9));
  if (intervals % 2 != 0) ++intervals;
  return SpatialGrid::symmetric(half, intervals + 1);
}

}  // namespace ptspec
