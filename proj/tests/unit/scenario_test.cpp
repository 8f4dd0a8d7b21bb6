#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "viscoflow/config.hpp"
#include "viscoflow/csv.hpp"
#include "viscoflow/scenario.hpp"

using namespace viscoflow;

namespace {

bool mentions(const ConfigError& e, const std::string& where, const std::string& text) {
  for (const auto& i : e.issues())
    if (i.where == where && i.message.find(text) != std::string::npos) return true;
  return false;
}

ConfigError expect_error(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "config accepted:\n" << text;
  return ConfigError({});
}

struct Captured {
  RunRecord record;
  std::string out;
  std::string err;
};

Captured run_command(const std::string& cmd, const std::string& text, DispatchOptions opt = {}) {
  std::ostringstream out, err;
  Captured c;
  c.record = dispatch(cmd, parse_config(text), opt, out, err);
  c.out = out.str();
  c.err = err.str();
  return c;
}

const char* unit_bulk = "[model]\nsystem = bulk\n[material]\nA = 0.5\n";

const char* breakdown_cfg = R"(
[model]
geometry = spherical
[profile]
density = 1
velocity = 1
F_factor = 1.1
[grid]
n_cells = 256
x_max = 2
[run]
t_end = 0.1
[tolerances]
grad_factor = 10
)";

}  // namespace

TEST(Csv, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t b = bits(rng);
    double x;
    std::memcpy(&x, &b, sizeof x);
    if (!std::isfinite(x)) continue;
    double y = 0.0;
    ASSERT_TRUE(parse_double(format_double(x), y));
    EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0);
  }
}

TEST(Csv, ParseRejectsJunk) {
  double x;
  EXPECT_FALSE(parse_double("1.5x", x));
  EXPECT_FALSE(parse_double("", x));
  EXPECT_TRUE(parse_double("+3", x));
  EXPECT_EQ(x, 3.0);
}

TEST(Csv, WriterChecksWidth) {
  std::ostringstream os;
  CsvWriter w(os, {"a", "b"});
  w.row({1, 0.5});
  EXPECT_THROW(w.row({1}), std::invalid_argument);
  EXPECT_EQ(os.str(), "a,b\n1,0.5\n");
}

TEST(Config, MinimalBulkUsesDefaults) {
  const auto c = parse_config("[model]\nsystem = bulk\n");
  EXPECT_EQ(c, ScenarioConfig{});
  const auto echo = print_config(c);
  EXPECT_NE(echo.find("gamma = 2"), std::string::npos);
  EXPECT_NE(echo.find("grad_factor = 1000"), std::string::npos);
}

TEST(Config, GammaMustExceedOne) {
  const auto e = expect_error("[material]\n\ngamma = 1.0\n");
  EXPECT_TRUE(mentions(e, "line 3", "gamma must exceed 1"));
}

TEST(Config, ShearSphericalRejected) {
  const auto e = expect_error("[model]\nsystem = shear\ngeometry = spherical\n");
  EXPECT_TRUE(mentions(e, "line 3", "unsupported combination"));
}

TEST(Config, ReportsEveryErrorWithLineNumbers) {
  const auto e = expect_error("[model]\nsystem = fluid\n[bogus]\nx = 1\n[grid]\nn_cells = -3\nno equals sign\nwat = 1\n");
  EXPECT_TRUE(mentions(e, "line 2", "expected one of"));
  EXPECT_TRUE(mentions(e, "line 3", "unknown section"));
  EXPECT_TRUE(mentions(e, "line 6", "grid.n_cells"));
  EXPECT_TRUE(mentions(e, "line 7", "expected key = value"));
  EXPECT_TRUE(mentions(e, "line 8", "unknown key"));
  EXPECT_EQ(e.issues().size(), 5u);
}

TEST(Config, CommentsAndBareKeys) {
  const auto c = parse_config("# header\ncfl = 0.3   # trailing\n[grid]\nx_max = 4 # more\n");
  EXPECT_EQ(c.solver.cfl, 0.3);
  EXPECT_EQ(c.x_max, 4.0);
}

TEST(Config, OverridesApplyAfterFile) {
  const auto c = parse_config("[solver]\ncfl = 0.3\n", {"solver.cfl=0.2", "grad_factor=5", "zeta = power 2 0.5"});
  EXPECT_EQ(c.solver.cfl, 0.2);
  EXPECT_EQ(c.monitor.grad_factor, 5.0);
  ASSERT_NE(c.material.zeta.spec(), nullptr);
  EXPECT_EQ(c.material.zeta.spec()->kind, LawSpec::Kind::power);
  const auto e = expect_error("", {"nonsense", "cfl=2"});
  EXPECT_TRUE(mentions(e, "override 1", "expected key=value"));
}

TEST(Config, ValidationPointsAtOverride) {
  const auto e = expect_error("[material]\ngamma = 2\n", {"gamma=0.5"});
  EXPECT_TRUE(mentions(e, "override 1", "gamma must exceed 1"));
}

TEST(Config, EveryToleranceOverridable) {
  const auto c = parse_config("", {"condition_cap=1e6", "cluster_tol=1e-6", "symmetry_tol=1e-12", "singular_tol=1e-13",
                                   "imag_tol=1e-8", "marginal_band=1e-8", "grad_factor=50", "dt_floor=1e-10",
                                   "front_tol=1e-6", "front_slack_cells=4", "growth_rel_tol=1e-5",
                                   "ringdown_rel_tol=0.05", "fit_residual=1e-2"});
  EXPECT_EQ(c.characteristic.condition_cap, 1e6);
  EXPECT_EQ(c.monitor.front_slack_cells, 4.0);
  EXPECT_EQ(c.fit_residual, 1e-2);
}

TEST(Config, FrontContainmentChecked) {
  const auto e = expect_error("[model]\ngeometry = spherical\n[run]\nt_end = 5\n");
  EXPECT_TRUE(mentions(e, "config", "does not contain the front"));
}

TEST(Config, PlaneWaveNeedsWholeWavelengths) {
  const auto e = expect_error("[profile]\nkind = plane_wave\nk = 1\n[grid]\nboundary = periodic\nx_max = 5\n");
  ASSERT_FALSE(e.issues().empty());
  EXPECT_NO_THROW(parse_config("[profile]\nkind = plane_wave\nk = 3.141592653589793\n[grid]\nboundary = periodic\n"));
}

TEST(Config, PrintParseRoundTrip) {
  for (const char* text : {unit_bulk, breakdown_cfg}) {
    const auto c = parse_config(text);
    EXPECT_EQ(parse_config(print_config(c)), c);
  }
}

TEST(Config, RoundTripRandomValues) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    ScenarioConfig c;
    c.material.A = u(rng) * 10;
    c.material.gamma = 1 + u(rng) * 2;
    c.material.zeta = TransportLaw::named({LawSpec::Kind::stress_lorentzian, {u(rng), u(rng)}});
    c.material.tau = TransportLaw::named({LawSpec::Kind::power, {u(rng), -u(rng)}});
    c.reference.rho_bar = 1 + u(rng);
    c.reference.v_bar = {u(rng), -u(rng), 0};
    c.reference.R = 0.1 * u(rng);
    c.bump.density = u(rng);
    c.origin = 1.0;
    c.solver.cfl = u(rng);
    c.solver.limiter = i % 2 ? Limiter::mc : Limiter::minmod;
    c.t_end = 0.01 * u(rng);
    c.snapshot_times = {0.0, c.t_end * u(rng)};
    c.direction = {u(rng), u(rng), u(rng)};
    c.monitor.grad_factor = u(rng) * 1e4;
    ASSERT_TRUE(validate_config(c).empty()) << print_config(c);
    EXPECT_EQ(parse_config(print_config(c)), c);
  }
}

TEST(Sweep, Parse) {
  const auto s = parse_sweep("0.5:2:4");
  EXPECT_EQ(s.k_min, 0.5);
  EXPECT_EQ(s.k_max, 2.0);
  EXPECT_EQ(s.count, 4u);
  EXPECT_THROW(parse_sweep("1:2"), ConfigError);
  EXPECT_THROW(parse_sweep("2:1:3"), ConfigError);
  EXPECT_THROW(parse_sweep("0:1:0"), ConfigError);
}

TEST(Dispatch, SpeedsListsUnitBulkSpectrum) {
  const auto c = run_command("speeds", unit_bulk);
  EXPECT_EQ(c.record.exit_code, exit_code::ok);
  EXPECT_NE(c.out.find("1.414213562373"), std::string::npos);
  EXPECT_NE(c.out.find("-1.414213562373"), std::string::npos);
  EXPECT_NE(c.out.find("3           3"), std::string::npos);  // triple advective speed
}

TEST(Dispatch, StabilityPrintsUnitCubic) {
  const auto c = run_command("stability", unit_bulk);
  EXPECT_EQ(c.record.exit_code, exit_code::ok);
  EXPECT_NE(c.out.find("coefficients: 1 1 2 1"), std::string::npos);
  EXPECT_NE(c.out.find("verdict stable"), std::string::npos);
}

TEST(Dispatch, DispersionSweepCsv) {
  DispatchOptions opt;
  opt.sweep = parse_sweep("0:1:3");
  const auto c = run_command("dispersion", unit_bulk, opt);
  std::istringstream is(c.out);
  std::string header, line;
  std::getline(is, header);
  EXPECT_EQ(header, "k,re_omega_1,im_omega_1,re_omega_2,im_omega_2,re_omega_3,im_omega_3");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Dispatch, BlowupCertificate) {
  const auto c = run_command("blowup-cert", breakdown_cfg);
  EXPECT_EQ(c.record.exit_code, exit_code::ok);
  EXPECT_NE(c.out.find("satisfied   true"), std::string::npos);
  EXPECT_NE(c.out.find("threshold   58.04"), std::string::npos);
}

TEST(Dispatch, CertificateRefusedIsConfigError) {
  const auto c = run_command("blowup-cert", unit_bulk);
  EXPECT_EQ(c.record.exit_code, exit_code::config_error);
  EXPECT_NE(c.err.find("spherical"), std::string::npos);
}

TEST(Dispatch, SimulateEquilibriumIsFlat) {
  const auto dir = std::filesystem::temp_directory_path() / "viscoflow_test_equilibrium";
  std::filesystem::remove_all(dir);
  DispatchOptions opt;
  opt.out_dir = dir.string();
  const auto c = run_command("simulate", "[grid]\nn_cells = 32\n[run]\nt_end = 0.1\n", opt);
  EXPECT_EQ(c.record.exit_code, exit_code::ok);
  std::ifstream series(dir / "series.csv");
  std::string header, line;
  std::getline(series, header);
  EXPECT_EQ(header, "t,dt,F,dM,G,max_grad_u,max_grad_rho");
  int rows = 0;
  while (std::getline(series, line)) {
    ++rows;
    EXPECT_NE(line.find(",0,0,0,0,0"), std::string::npos) << line;
  }
  EXPECT_GT(rows, 2);
  std::ifstream record(dir / "run_record.txt");
  std::stringstream text;
  text << record.rdbuf();
  EXPECT_NE(text.str().find("# version: viscoflow"), std::string::npos);
  EXPECT_NE(text.str().find("# status: ok"), std::string::npos);
  // the echoed config parses back to the one that ran
  EXPECT_EQ(parse_config(text.str()), parse_config("[grid]\nn_cells = 32\n[run]\nt_end = 0.1\n"));
  std::filesystem::remove_all(dir);
}

TEST(Dispatch, SimulateBreakdownExitCode) {
  const auto c = run_command("simulate", breakdown_cfg);
  EXPECT_EQ(c.record.exit_code, exit_code::breakdown);
  EXPECT_NE(c.record.status.find("breakdown"), std::string::npos);
}

TEST(Dispatch, DiagnosticsStreamSeries) {
  DispatchOptions opt;
  opt.diagnostics = true;
  const auto c = run_command("simulate", breakdown_cfg, opt);
  EXPECT_EQ(c.out.rfind("t,dt,F,dM,G,max_grad_u,max_grad_rho\n", 0), 0u);
  EXPECT_NE(c.err.find("breakdown"), std::string::npos);
}

TEST(Dispatch, ShearSnapshotColumns) {
  DispatchOptions opt;
  const auto dir = std::filesystem::temp_directory_path() / "viscoflow_test_shear";
  opt.out_dir = dir.string();
  const auto c = run_command("simulate", "[model]\nsystem = shear\n[grid]\nn_cells = 16\nx_max = 4\n[run]\nt_end = 0.05\n"
                             "snapshot_times = 0 0.05\n[reference]\nR = 0.5\n[profile]\norigin = 2\ntransverse = 0.01\n", opt);
  EXPECT_EQ(c.record.exit_code, exit_code::ok) << c.err;
  std::ifstream snaps(dir / "snapshots.csv");
  std::string header;
  std::getline(snaps, header);
  EXPECT_EQ(header, "t,cell_center,rho,u,v2,v3,Pi,Pi11,Pi12,Pi13,Pi22,Pi23,Pi33");
  std::filesystem::remove_all(dir);
}

TEST(Dispatch, UnknownSubcommand) {
  const auto c = run_command("explode", unit_bulk);
  EXPECT_EQ(c.record.exit_code, exit_code::config_error);
}
