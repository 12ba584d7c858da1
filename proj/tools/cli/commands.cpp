#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cli/drive_spec.hpp"
#include "json.hpp"
#include "ptspec/closed_form.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/observables.hpp"
#include "ptspec/tdse.hpp"

namespace ptspec::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  std::string drive;
  int n = 0;
  double t = 0.0;
  std::string grid;
  double ode_dt = kDefaultOdeStep;
};

void add_common(CLI::App* cmd, Common& c, bool with_n = true, bool with_t = true) {
  cmd->add_option("--drive", c.drive, "const:<f0> | poly:<c0>,<c1>,... | file:<path>")->required();
  if (with_n) cmd->add_option("--n", c.n, "oscillator quantum number")->check(CLI::NonNegativeNumber);
  if (with_t) cmd->add_option("--t", c.t, "time");
  cmd->add_option("--grid", c.grid, "xmin:xmax:npts (default: widened from -12:12:2401 as needed)");
  cmd->add_option("--ode-dt", c.ode_dt, "RK4 step for sampled drives")->check(CLI::PositiveNumber);
}

struct Problem {
  Drive drive;
  ShiftSolution shift;
};

Problem load(const Common& c) {
  Drive d = parse_drive_spec(c.drive);
  ShiftSolution s = shift_for(d, c.ode_dt);
  return {std::move(d), std::move(s)};
}

SpatialGrid grid_for(const Common& c, const ShiftSolution& s, double t) {
  return c.grid.empty() ? recommended_grid(s, t) : parse_grid_spec(c.grid);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

json complex_json(complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

// ---- solve ----

struct SolveArgs {
  Common c;
  std::string out;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const Problem p = load(a.c);
  const ClosedFormState s(a.c.n, p.drive, p.shift);
  const SpatialGrid grid = grid_for(a.c, p.shift, a.c.t);
  const GridState state = psi_sample(s, grid, a.c.t);

  std::string text = "x,re_psi,im_psi,abs2\n";
  const auto amps = state.amplitudes();
  for (int i = 0; i < grid.size(); ++i) {
    const complex v = amps[static_cast<std::size_t>(i)];
    text += format_double(grid.x(i)) + ',' + format_double(v.real()) + ',' + format_double(v.imag()) + ',' +
            format_double(std::norm(v)) + '\n';
  }
  emit(text, a.out, out);
  return kExitOk;
}

// ---- energy ----

struct EnergyArgs {
  Common c;
  std::string method = "quadrature";
  std::string format = "json";
};

int cmd_energy(const EnergyArgs& a, std::ostream& out) {
  const Problem p = load(a.c);
  const ClosedFormState s(a.c.n, p.drive, p.shift);
  const SpatialGrid grid = grid_for(a.c, p.shift, a.c.t);

  // Closed form first, so a capability error is reported before any sampling.
  std::optional<ComplexEnergy> closed;
  if (a.method != "quadrature") closed = energy_closed(a.c.n, p.drive, p.shift, a.c.t);
  const ExpectationReport quad = expectation_report(s, grid, a.c.t, EnergyMethod::quadrature);

  const ComplexEnergy primary = closed ? *closed : quad.energy;
  const std::string method = a.method == "both" ? "closed" : a.method;
  std::optional<double> disagreement;
  if (a.method == "both") disagreement = std::abs(closed->value() - quad.energy.value());

  if (a.format == "csv") {
    std::string text = "method,re_E,im_E,u_imag";
    text += disagreement ? ",disagreement\n" : "\n";
    auto row = [&](const std::string& m, const ComplexEnergy& e) {
      text += m + ',' + format_double(e.re) + ',' + format_double(e.im) + ',' + format_double(quad.u_imag);
      if (disagreement) text += ',' + format_double(*disagreement);
      text += '\n';
    };
    row(method, primary);
    if (disagreement) row("quadrature", quad.energy);
    out << text;
    return kExitOk;
  }

  json j{{"drive", a.c.drive}, {"n", a.c.n}, {"t", a.c.t},    {"method", method},
         {"re_E", primary.re}, {"im_E", primary.im}, {"u_imag", quad.u_imag}};
  if (disagreement) {
    j["quadrature"] = json{{"re_E", quad.energy.re}, {"im_E", quad.energy.im}};
    j["disagreement"] = *disagreement;
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

// ---- scan ----

struct ScanArgs {
  Common c;
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 0;
  std::string out;
};

unsigned scan_threads(std::size_t points) {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PT_SPECTRUM_THREADS"); env && *env) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (*end != '\0' || cap < 1)
      throw InvalidArgument(std::string("PT_SPECTRUM_THREADS must be a positive integer, got '") + env + "'");
    threads = std::min<unsigned long>(threads, static_cast<unsigned long>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(threads, points));
}

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  if (a.steps < 2) throw InvalidArgument("scan: --steps must be at least 2");
  if (!(a.t0 < a.t1)) throw InvalidArgument("scan: need t0 < t1");
  const Problem p = load(a.c);
  const ClosedFormState s(a.c.n, p.drive, p.shift);
  const std::optional<SpatialGrid> fixed =
      a.c.grid.empty() ? std::nullopt : std::optional<SpatialGrid>(parse_grid_spec(a.c.grid));

  const auto points = static_cast<std::size_t>(a.steps);
  std::vector<double> times(points);
  for (std::size_t k = 0; k < points; ++k)
    times[k] = (k + 1 == points) ? a.t1 : a.t0 + (a.t1 - a.t0) * static_cast<double>(k) / (a.steps - 1);

  std::vector<ExpectationReport> rows(points);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_at = points;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < points;) {
      try {
        const SpatialGrid grid = fixed ? *fixed : recommended_grid(p.shift, times[k]);
        rows[k] = expectation_report(s, grid, times[k], EnergyMethod::quadrature);
      } catch (...) {
        // Keep the earliest failing time so the reported error is deterministic.
        std::lock_guard lock(failure_mutex);
        if (k < failed_at) {
          failed_at = k;
          failure = std::current_exception();
        }
      }
    }
  };
  const unsigned threads = scan_threads(points);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::string text = "t,re_E,im_E,u_imag\n";
  for (std::size_t k = 0; k < points; ++k)
    text += format_double(times[k]) + ',' + format_double(rows[k].energy.re) + ',' +
            format_double(rows[k].energy.im) + ',' + format_double(rows[k].u_imag) + '\n';
  emit(text, a.out, out);
  return kExitOk;
}

// ---- verify ----

struct VerifyArgs {
  Common c;
  std::vector<int> n_list{0};
  double cn_dt = kDefaultCnStep;
  double tol_pde = 1e-4;
  double tol_oracle = 1e-3;
  double tol_uimag = 1e-8;
  std::optional<double> tol_ode;
  double tol_decay = kEndpointDecay;
};

struct Sampled {
  GridState state;
  double endpoint_ratio;
};

Sampled sample_unchecked(const ClosedFormState& s, const SpatialGrid& grid, double t) {
  std::vector<complex> amps(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) amps[static_cast<std::size_t>(i)] = psi_eval(s, grid.x(i), t);
  GridState st(grid, t, std::move(amps), s.n());
  const double ratio = st.endpoint_ratio();
  return {std::move(st), ratio};
}

std::string truncation_note(const SpatialGrid& grid, double t, double ratio) {
  std::ostringstream os;
  os << "edge amplitude at x=" << grid.x_min() << " or x=" << grid.x_max() << " is " << ratio
     << " of the peak at t=" << t << "; widen the grid";
  return os.str();
}

json check(const std::string& name, std::optional<int> n, double value, double tolerance) {
  json j{{"name", name}};
  if (n) j["n"] = *n;
  j["value"] = value;
  j["tolerance"] = tolerance;
  j["pass"] = std::isfinite(value) && value <= tolerance;
  return j;
}

json failed_check(const std::string& name, std::optional<int> n, double tolerance, const std::string& why) {
  json j{{"name", name}};
  if (n) j["n"] = *n;
  j["value"] = nullptr;
  j["tolerance"] = tolerance;
  j["pass"] = false;
  j["diagnostic"] = why;
  return j;
}

double relative_l2(std::span<const complex> got, std::span<const complex> want, double h) {
  std::vector<double> diff(got.size()), ref(got.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    diff[i] = std::norm(got[i] - want[i]);
    ref[i] = std::norm(want[i]);
  }
  return std::sqrt(simpson(diff, h) / simpson(ref, h));
}

json oracle_check(const ClosedFormState& s, const SpatialGrid& grid, double t, const VerifyArgs& a) {
  if (t == 0.0) return check("oracle_cn", s.n(), 0.0, a.tol_oracle);
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(t) / a.cn_dt - 1e-9)));
  const double dt = std::abs(t) / static_cast<double>(steps);
  Sampled start = sample_unchecked(s, grid, 0.0);
  if (!(start.endpoint_ratio < a.tol_decay))
    return failed_check("oracle_cn", s.n(), a.tol_oracle,
                        "truncation: " + truncation_note(grid, 0.0, start.endpoint_ratio));
  // The L2 comparison covers the edge nodes, so boundary contact shows up in
  // the error itself; only stop on outright blow-up at the edges.
  PropagationConfig cfg{grid, dt, 0.0, t, drive_potential(s.drive())};
  cfg.reflection_threshold = 1.0;
  const GridState end = crank_nicolson_propagate(start.state, cfg);
  const Sampled want = sample_unchecked(s, grid, t);
  json j = check("oracle_cn", s.n(), relative_l2(end.amplitudes(), want.state.amplitudes(), grid.spacing()),
                 a.tol_oracle);
  j["edge_ratio"] = end.endpoint_ratio();
  j["dt"] = dt;
  return j;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const Problem p = load(a.c);
  const double t = a.c.t;
  SpatialGrid grid = grid_for(a.c, p.shift, t);
  if (a.c.grid.empty()) {
    // The oracle starts from t = 0, so the grid has to hold that state too.
    const SpatialGrid at_zero = recommended_grid(p.shift, 0.0);
    if (at_zero.x_max() > grid.x_max()) grid = at_zero;
  }
  const int pde_points = static_cast<int>(std::lround((grid.x_max() - grid.x_min()) / kVerifyPdeSpacing)) + 1;
  const SpatialGrid pde_grid(grid.x_min(), grid.x_max(), pde_points);

  json checks = json::array();
  bool ok = true;
  auto push = [&](json j) {
    ok = ok && j["pass"].get<bool>();
    checks.push_back(std::move(j));
  };

  const double ode_tol = a.tol_ode ? *a.tol_ode : shift_residual_bound(p.drive, p.shift);
  push(check("ode_residual", std::nullopt, shift_residual(p.drive, p.shift), ode_tol));

  for (int n : a.n_list) {
    const ClosedFormState s(n, p.drive, p.shift);

    const Sampled at_t = sample_unchecked(s, grid, t);
    json decay = check("decay", n, at_t.endpoint_ratio, a.tol_decay);
    if (!decay["pass"].get<bool>()) decay["diagnostic"] = "truncation: " + truncation_note(grid, t, at_t.endpoint_ratio);
    const bool decayed = decay["pass"].get<bool>();
    push(std::move(decay));

    try {
      push(check("pde_residual", n, pde_residual(s, pde_grid, t, kVerifyPdeTimeStep), a.tol_pde));
    } catch (const Error& e) {
      push(failed_check("pde_residual", n, a.tol_pde, e.what()));
    }

    if (decayed) {
      try {
        const ComplexEnergy e = energy_quadrature(at_t.state, p.drive);
        push(check("im_energy_vs_u_imag", n, std::abs(e.im - u_imag_expectation(at_t.state, p.drive)), a.tol_uimag));
      } catch (const Error& e) {
        push(failed_check("im_energy_vs_u_imag", n, a.tol_uimag, e.what()));
      }
    } else {
      push(failed_check("im_energy_vs_u_imag", n, a.tol_uimag, "truncation: state not decayed on the grid"));
    }

    try {
      push(oracle_check(s, grid, t, a));
    } catch (const TruncationError& e) {
      push(failed_check("oracle_cn", n, a.tol_oracle, std::string("truncation: ") + e.what()));
    } catch (const Error& e) {
      push(failed_check("oracle_cn", n, a.tol_oracle, e.what()));
    }
  }

  json report{{"drive", a.c.drive},
              {"t", t},
              {"grid", json{{"x_min", grid.x_min()}, {"x_max", grid.x_max()}, {"n_points", grid.size()}}},
              {"checks", std::move(checks)},
              {"pass", ok}};
  out << report.dump(2) << '\n';
  return ok ? kExitOk : kExitVerifyFailed;
}

// ---- check-pt ----

int cmd_check_pt(const Common& c, std::ostream& out) {
  const Problem p = load(c);
  const ClosedFormState s(c.n, p.drive, p.shift);
  const SpatialGrid grid = grid_for(c, p.shift, c.t);

  json j{{"drive", c.drive}, {"n", c.n}, {"t", c.t}};
  try {
    j["hamiltonian_pt"] = pt_check_hamiltonian(p.drive);
  } catch (const UndecidableError&) {
    j["hamiltonian_pt"] = "undecidable";
  }
  try {
    const PtStateReport r = pt_check_state(s, grid, c.t);
    j["state_pt_deviation"] = r.deviation;
    j["state_pt_phase"] = complex_json(r.phase);
    j["state_pt_unbroken"] = r.deviation <= kPtStateTolerance;
  } catch (const NotApplicableError&) {
    j["state_pt_deviation"] = "not-applicable";
    j["state_pt_phase"] = "not-applicable";
    j["state_pt_unbroken"] = "not-applicable";
  }
  const ParityReport parity = parity_condition_check(s, grid, c.t);
  j["parity_condition_satisfied"] = parity.satisfied;
  j["uimag_odd_defect"] = parity.uimag_odd_defect;
  j["modulus_even_defect"] = parity.modulus_even_defect;
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

SpatialGrid parse_grid_spec(std::string_view spec) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t colon = spec.find(':', begin);
    parts.emplace_back(spec.substr(begin, colon == std::string_view::npos ? std::string_view::npos : colon - begin));
    if (colon == std::string_view::npos) break;
    begin = colon + 1;
  }
  if (parts.size() != 3) throw InvalidArgument("grid spec: want xmin:xmax:npts, got '" + std::string(spec) + "'");
  try {
    std::size_t used_a = 0, used_b = 0, used_n = 0;
    const double x_min = std::stod(parts[0], &used_a);
    const double x_max = std::stod(parts[1], &used_b);
    const int n = std::stoi(parts[2], &used_n);
    if (used_a != parts[0].size() || used_b != parts[1].size() || used_n != parts[2].size())
      throw std::invalid_argument("trailing characters");
    return SpatialGrid(x_min, x_max, n);
  } catch (const std::logic_error&) {
    throw InvalidArgument("grid spec: cannot parse '" + std::string(spec) + "' as xmin:xmax:npts");
  }
}

ShiftSolution shift_for(const Drive& d, double ode_dt) {
  if (d.kind() != Drive::Kind::sampled) return solve_shift_analytic(d);
  const auto [t0, t1] = *d.span();
  return solve_shift_numeric(d, t0, t1, {d(t0), d.derivative(t0)}, ode_dt);
}

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact solutions of H = p^2 + x^2 + 2i f(t) x: sampling, energies and PT checks", "ptspec-cli"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "sample Psi_n(x, t) on a grid as CSV");
  add_common(solve_cmd, solve.c);
  solve_cmd->add_option("--out", solve.out, "output path (default stdout)");

  EnergyArgs energy;
  auto* energy_cmd = app.add_subcommand("energy", "complex energy expectation <E>");
  add_common(energy_cmd, energy.c);
  energy_cmd->add_option("--method", energy.method)->check(CLI::IsMember({"closed", "quadrature", "both"}));
  energy_cmd->add_option("--format", energy.format)->check(CLI::IsMember({"json", "csv"}));

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "quadrature <E> and <U_I> over a uniform time mesh as CSV");
  add_common(scan_cmd, scan.c, true, false);
  scan_cmd->add_option("--t0", scan.t0);
  scan_cmd->add_option("--t1", scan.t1);
  scan_cmd->add_option("--steps", scan.steps, "number of time points (>= 2)")->required();
  scan_cmd->add_option("--out", scan.out, "output path (default stdout)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run every consistency check and report JSON");
  add_common(verify_cmd, verify.c, false, true);
  verify_cmd->add_option("--n-list", verify.n_list, "comma-separated quantum numbers")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--cn-dt", verify.cn_dt, "Crank-Nicolson step")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tol-pde", verify.tol_pde);
  verify_cmd->add_option("--tol-oracle", verify.tol_oracle);
  verify_cmd->add_option("--tol-uimag", verify.tol_uimag);
  verify_cmd->add_option("--tol-ode", verify.tol_ode, "absolute ODE residual bound (default 1e-9 (1 + max|f|))");
  verify_cmd->add_option("--tol-decay", verify.tol_decay);

  Common pt;
  auto* pt_cmd = app.add_subcommand("check-pt", "PT symmetry of H and Psi_n, and the parity condition");
  add_common(pt_cmd, pt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*energy_cmd) return cmd_energy(energy, out);
    if (*scan_cmd) return cmd_scan(scan, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*pt_cmd) return cmd_check_pt(pt, out);
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitTruncation;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const DriveSpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  }
  return kExitUsage;
}

}  // namespace ptspec::cli
