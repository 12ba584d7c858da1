#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/drive_spec.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace ptspec;
using namespace ptspec::cli;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ptspec-cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ptspec_cli_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("drive spec grammar") {
  CHECK(parse_drive_spec("const:2").kind() == Drive::Kind::constant);
  CHECK(parse_drive_spec("const:2")(5.0) == 2.0);
  const Drive p = parse_drive_spec("poly:0,0,1");
  CHECK(p.kind() == Drive::Kind::polynomial);
  CHECK(p(3.0) == 9.0);
  CHECK(parse_drive_spec("poly:1.5e-1, -2")(1.0) == doctest::Approx(-1.85));

  SUBCASE("bad number reports position and token") {
    try {
      parse_drive_spec("poly:0,a,1");
      FAIL("expected a parse error");
    } catch (const DriveSpecError& e) {
      CHECK(e.position() == 7);
      CHECK(e.token() == "a");
    }
  }
  SUBCASE("other failures") {
    CHECK_THROWS_AS(parse_drive_spec("poly:"), DriveSpecError);
    CHECK_THROWS_AS(parse_drive_spec("poly:1,,2"), DriveSpecError);
    CHECK_THROWS_AS(parse_drive_spec("const:inf"), DriveSpecError);
    CHECK_THROWS_AS(parse_drive_spec("sine:1"), DriveSpecError);
    CHECK_THROWS_AS(parse_drive_spec("t^2"), DriveSpecError);
    CHECK_THROWS_AS(parse_drive_spec("file:/no/such/file.csv"), DriveSpecError);
  }
}

TEST_CASE("file drive reads two-column csv with a header") {
  const auto path = temp_path("drive.csv");
  {
    std::ofstream f(path);
    f << "t,f\n";
    for (int k = -20; k <= 20; ++k) f << k * 0.1 << ',' << (k * 0.1) * (k * 0.1) << '\n';
  }
  const Drive d = parse_drive_spec("file:" + path.string());
  CHECK(d.kind() == Drive::Kind::sampled);
  CHECK(d(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.span()->first == doctest::Approx(-2.0));

  std::ofstream(path) << "t,f\n0,1\n0.5,oops\n1,2\n";
  CHECK_THROWS_AS(parse_drive_spec("file:" + path.string()), DriveSpecError);
  std::filesystem::remove(path);
}

TEST_CASE("grid spec") {
  const SpatialGrid g = parse_grid_spec("-12:12:2401");
  CHECK(g.x_min() == -12.0);
  CHECK(g.size() == 2401);
  CHECK_THROWS_AS(parse_grid_spec("-12:12"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid_spec("-12:12:x"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid_spec("12:-12:100"), InvalidArgument);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, -1.0 / 3.0, 2.25, 1e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(2.25) == "2.25");
}

TEST_CASE("solve writes the sampled state") {
  const Result r = invoke({"solve", "--drive", "poly:0,0,1", "--n", "0", "--t", "1", "--grid", "-12:12:2401"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == "x,re_psi,im_psi,abs2");
  CHECK(rows.size() == 2401);
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("solve for the undriven ground state is the Gaussian") {
  const Result r = invoke({"solve", "--drive", "const:0", "--n", "0", "--t", "0"});
  REQUIRE(r.code == 0);
  double worst = 0.0;
  for (const auto& row : csv_rows(r.out)) worst = std::max(worst, std::abs(row[3] - std::exp(-row[0] * row[0])));
  CHECK(worst <= 1e-15);
}

TEST_CASE("solve exit codes") {
  CHECK(invoke({"solve", "--drive", "poly:a,b"}).code == kExitUsage);
  CHECK(invoke({"solve"}).code == kExitUsage);
  CHECK(invoke({"solve", "--drive", "const:0", "--grid", "-2:2:201"}).code == kExitTruncation);
  CHECK(invoke({"solve", "--drive", "const:0", "--n", "65"}).code == kExitCapability);
  CHECK(invoke({"bogus"}).code == kExitUsage);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("solve to file is deterministic") {
  const auto a = temp_path("a.csv"), b = temp_path("b.csv");
  REQUIRE(invoke({"solve", "--drive", "poly:0,1", "--n", "1", "--t", "0.7", "--out", a.string()}).code == 0);
  REQUIRE(invoke({"solve", "--drive", "poly:0,1", "--n", "1", "--t", "0.7", "--out", b.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("energy: linear drive, closed form") {
  const Result r = invoke({"energy", "--drive", "poly:0,1", "--n", "0", "--t", "1", "--method", "closed"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["method"] == "closed");
  CHECK(std::abs(j["re_E"].get<double>() - 2.25) <= 1e-12);
  CHECK(std::abs(j["im_E"].get<double>() - 1.0) <= 1e-12);
  CHECK(j.contains("u_imag"));
}

TEST_CASE("energy: both methods agree for f = t^2") {
  const Result r = invoke({"energy", "--drive", "poly:0,0,1", "--n", "0", "--t", "1", "--method", "both"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["disagreement"].get<double>() <= 1e-6);
  CHECK(std::abs(j["quadrature"]["im_E"].get<double>() - 2.0) <= 1e-6);
}

TEST_CASE("energy: constant drive shifts the level by f0^2") {
  const Result r = invoke({"energy", "--drive", "const:2", "--n", "0", "--t", "7", "--method", "closed"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["re_E"].get<double>() - 5.0) <= 1e-12);
  CHECK(std::abs(j["im_E"].get<double>()) <= 1e-12);
}

TEST_CASE("energy: csv format and errors") {
  const Result csv =
      invoke({"energy", "--drive", "poly:0,1", "--n", "1", "--t", "1", "--method", "both", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("method,re_E,im_E,u_imag,disagreement\nclosed,", 0) == 0);
  CHECK(csv.out.find("\nquadrature,") != std::string::npos);

  CHECK(invoke({"energy", "--drive", "poly:0,1", "--n", "2", "--t", "1", "--method", "closed"}).code ==
        kExitCapability);
  CHECK(invoke({"energy", "--drive", "poly:0,1", "--n", "2", "--t", "1", "--method", "quadrature"}).code == kExitOk);
  CHECK(invoke({"energy", "--drive", "poly:0,1", "--method", "exact"}).code == kExitUsage);
  CHECK(invoke({"energy", "--drive", "poly:0,1", "--format", "xml"}).code == kExitUsage);
}

TEST_CASE("scan: f = t^2 trajectory") {
  const Result r = invoke({"scan", "--drive", "poly:0,0,1", "--n", "0", "--t0", "0", "--t1", "2", "--steps", "41"});
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = csv_rows(r.out, &header);
  CHECK(header == "t,re_E,im_E,u_imag");
  REQUIRE(rows.size() == 41);
  CHECK(rows.front()[0] == 0.0);
  CHECK(rows.back()[0] == 2.0);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k][0] > rows[k - 1][0]);
  const auto& at_one = rows[20];
  CHECK(at_one[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(at_one[1] - 2.25) <= 1e-6);
  CHECK(std::abs(at_one[2] - 2.0) <= 1e-6);
}

TEST_CASE("scan: constant drive stays real") {
  const Result r = invoke({"scan", "--drive", "const:1", "--t0", "0", "--t1", "3", "--steps", "7"});
  REQUIRE(r.code == 0);
  for (const auto& row : csv_rows(r.out)) CHECK(std::abs(row[2]) <= 1e-8);
}

TEST_CASE("scan: output does not depend on thread count") {
  const std::vector<std::string> args{"scan", "--drive", "poly:0,1", "--n", "1", "--t0", "-1", "--t1", "1", "--steps", "9"};
  setenv("PT_SPECTRUM_THREADS", "1", 1);
  const Result serial = invoke(args);
  setenv("PT_SPECTRUM_THREADS", "4", 1);
  const Result parallel = invoke(args);
  setenv("PT_SPECTRUM_THREADS", "zero", 1);
  const Result bad = invoke(args);
  unsetenv("PT_SPECTRUM_THREADS");
  REQUIRE(serial.code == 0);
  CHECK(serial.out == parallel.out);
  CHECK(bad.code == kExitUsage);
}

TEST_CASE("scan: argument errors") {
  CHECK(invoke({"scan", "--drive", "const:1", "--steps", "1"}).code == kExitUsage);
  CHECK(invoke({"scan", "--drive", "const:1", "--t0", "1", "--t1", "0", "--steps", "3"}).code == kExitUsage);
  CHECK(invoke({"scan", "--drive", "const:1"}).code == kExitUsage);
}

TEST_CASE("verify: full pipeline passes") {
  const Result r = invoke({"verify", "--drive", "poly:0,0,1", "--n-list", "0,1", "--t", "1"});
  INFO(r.out << r.err);
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  int oracles = 0;
  for (const auto& c : j["checks"]) {
    CHECK(c["pass"] == true);
    if (c["name"] == "oracle_cn") ++oracles;
  }
  CHECK(oracles == 2);

  CHECK(invoke({"verify", "--drive", "const:1", "--n-list", "0", "--t", "2"}).code == 0);
}

TEST_CASE("verify: coarse grid fails with truncation diagnostics") {
  const Result r = invoke({"verify", "--drive", "poly:0,0,1", "--n-list", "0", "--t", "1", "--grid", "-3:3:601"});
  CHECK(r.code == kExitVerifyFailed);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == false);
  bool saw_truncation = false;
  for (const auto& c : j["checks"])
    if (c.contains("diagnostic") && c["diagnostic"].get<std::string>().rfind("truncation", 0) == 0)
      saw_truncation = true;
  CHECK(saw_truncation);
}

TEST_CASE("verify: tolerance overrides can force failure") {
  const Result r = invoke({"verify", "--drive", "const:1", "--n-list", "0", "--t", "0.5", "--tol-oracle", "1e-30"});
  CHECK(r.code == kExitVerifyFailed);
}

TEST_CASE("check-pt records") {
  SUBCASE("f = t^2: unbroken but parity condition fails") {
    const Result r = invoke({"check-pt", "--drive", "poly:0,0,1", "--n", "0", "--t", "1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["hamiltonian_pt"] == true);
    CHECK(j["state_pt_deviation"].get<double>() <= 1e-8);
    CHECK(j["state_pt_phase"]["re"].get<double>() == doctest::Approx(1.0));
    CHECK(j["parity_condition_satisfied"] == false);
  }
  SUBCASE("constant drive: all true") {
    const json j = json::parse(invoke({"check-pt", "--drive", "const:1", "--n", "0", "--t", "1"}).out);
    CHECK(j["hamiltonian_pt"] == true);
    CHECK(j["state_pt_unbroken"] == true);
    CHECK(j["parity_condition_satisfied"] == true);
  }
  SUBCASE("f = t: not PT symmetric") {
    const Result r = invoke({"check-pt", "--drive", "poly:0,1", "--n", "0", "--t", "1"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["hamiltonian_pt"] == false);
    CHECK(j["state_pt_deviation"] == "not-applicable");
  }
  CHECK(invoke({"check-pt", "--drive", "const:1", "--grid", "-10:12:1001"}).code == kExitUsage);
}

#ifdef PTSPEC_CLI_PATH
TEST_CASE("binary exit codes") {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(PTSPEC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("energy --drive poly:0,1 --n 0 --t 1 --method closed") == 0);
  CHECK(status("solve --drive poly:a,b") == 2);
  CHECK(status("solve --drive const:0 --grid=-2:2:201") == 3);
  CHECK(status("energy --drive const:1 --n 3 --method closed") == 4);
  CHECK(status("verify --drive const:1 --n-list 0 --t 1 --grid=-3:3:601") == 1);
}
#endif
