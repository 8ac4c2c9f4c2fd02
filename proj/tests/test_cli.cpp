#include <doctest.h>

#include <filesystem>

#include "fhl/cli.hpp"
#include "fhl/error.hpp"

using namespace fhl;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Precondition;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fhl_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse_config("# comment\nregime=subcritical\nn=1\ns=0.3\neps=0.1\n\nmodes = 128\n");
  CHECK(c.regime == Regime::SubcriticalHartree);
  CHECK(c.s == 0.3);
  CHECK(c.modes == 128);
  CHECK(c.grid == 1024);
  CHECK(c.warnings.empty());
  CHECK(parse_config(serialize_config(c)) == c);

  RunConfig odd = c;
  odd.s = 0.1 + 0.2;
  odd.eps_list = {0.4, 0.2, 1.0 / 3.0};
  odd.domain_kind = "rectangle";
  odd.strategy = Strategy::NormalizedGradientFlow;
  odd.robin = false;
  CHECK(parse_config(serialize_config(odd)) == odd);
  CHECK(serialize_config(parse_config(serialize_config(odd))) == serialize_config(odd));
}

TEST_CASE("config errors") {
  CHECK(code_of([] { parse_config("regime=subcritical\nn=1\ns=two\n"); }) == ErrorCode::TypeError);
  CHECK(code_of([] { parse_config("regime=subcritical\nn=1\ns=0.3\ncolour=red\n"); }) == ErrorCode::UnknownKey);
  CHECK(code_of([] { parse_config("regime=subcritical\nn=1\n"); }) == ErrorCode::MissingRequired);
  CHECK(code_of([] { parse_config("regime=subcritical\nn=1.5\ns=0.3\n"); }) == ErrorCode::TypeError);
  CHECK(code_of([] { parse_config("regime=subcritical\nn=1\ns=0.3\njunk\n"); }) == ErrorCode::TypeError);
  CHECK(code_of([] { load_config("/nonexistent/run.cfg"); }) == ErrorCode::Io);
  const RunConfig dup = parse_config("regime=subcritical\nn=1\ns=0.3\ns=0.25\n");
  CHECK(dup.s == 0.25);
  CHECK(dup.warnings.size() == 1);
}

TEST_CASE("config helpers") {
  RunConfig c = parse_config("regime=subcritical\nn=1\ns=0.3\neps=0.1\n");
  CHECK(config_params(c, 0.1).mu == doctest::Approx(0.4));
  CHECK(config_domain(c).dim() == 1);
  CHECK(config_green_modes(c) == 20000);
  c.domain_kind = "rectangle";
  c.d = 0.6;
  CHECK(config_domain(c).ly() == doctest::Approx(0.6));
}

TEST_CASE("exit codes") {
  CHECK(run_command({"fhl", "solve", "--config", "/nonexistent/missing.cfg"}) == 1);
  CHECK(run_command({"fhl", "frobnicate"}) == 1);
  CHECK(run_command({"fhl", "constants", "--n", "1", "--s", "0.3", "--mu", "0.4", "--json"}) == 0);
  CHECK(run_command({"fhl", "constants", "--n", "2", "--s", "0.3", "--mu", "3"}) == 1);
  CHECK(run_command({"fhl", "selftest"}) == 0);

  const fs::path dir = scratch("noconv");
  write_text((dir / "run.cfg").string(), "regime=subcritical\nn=1\ns=0.3\neps=0.2\nmodes=64\ngrid=256\nmax_iter=3\n");
  CHECK(run_command({"fhl", "solve", "--config", (dir / "run.cfg").string(), "--out", (dir / "out").string()}) == 2);
  CHECK(fs::exists(dir / "out" / "record.json"));
}

TEST_CASE("solve, continuation and report archives") {
  const fs::path dir = scratch("archive");
  write_text((dir / "run.cfg").string(),
             "regime=subcritical\nn=1\ns=0.3\neps=0.2\nmodes=128\ngrid=512\ngreen_modes=4000\n");
  REQUIRE(run_command({"fhl", "solve", "--config", (dir / "run.cfg").string(), "--out", (dir / "solve").string()}) == 0);
  CHECK(fs::exists(dir / "solve" / "field.csv"));
  const json rec = json::parse(read_text((dir / "solve" / "record.json").string()));
  CHECK(rec.at("converged").get<bool>());
  CHECK(rec.at("coeffs").size() == 128);

  REQUIRE(run_command({"fhl", "continuation", "--config", (dir / "run.cfg").string(), "--eps", "0.3,0.2,0.1", "--out",
                       (dir / "sweep").string()}) == 0);
  const std::string summary = read_text((dir / "sweep" / "summary.csv").string());
  CHECK(summary.rfind("eps,mu_eps,mu_eps_pow_eps,x_eps,profile_dist,rate_lhs,boundary_sup,interior_L1\n", 0) == 0);
  const json doc = json::parse(read_text((dir / "sweep" / "report.json").string()));
  CHECK(doc.at("records").size() == 3);
  CHECK(doc.at("diagnostics").contains("rate_law"));

  // the archive is self-describing: a rebuilt report re-derives the same numbers
  const ContinuationReport back = report_from_json(doc);
  const RunConfig cfg = parse_config(doc.at("config").get<std::string>());
  CHECK(strip_timing(report_document(back, cfg)) == strip_timing(doc));

  REQUIRE(run_command({"fhl", "report", "--in", (dir / "sweep" / "report.json").string(), "--out",
                       (dir / "plots").string()}) == 0);
  for (const char* f : {"summary.csv", "mu_eps.svg", "rate_law.csv", "residual_trace.svg", "boundary.csv"})
    CHECK(fs::exists(dir / "plots" / f));
}

TEST_CASE("svg rendering") {
  Chart c{"t", "x", "y", true, true, {{"a", {{1.0, 2.0}, {10.0, 20.0}, {0.0, -1.0}}}}};
  const std::string svg = render_svg(c);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
}
