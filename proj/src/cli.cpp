#include "fhl/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "fhl/bubbles.hpp"
#include "fhl/constants.hpp"
#include "fhl/error.hpp"

namespace fhl {

namespace fs = std::filesystem;

namespace {

json series_json(const Series& s) {
  json out = json::array();
  for (const auto& [x, y] : s) out.push_back({x, y});
  return out;
}

json point_json(const Eigen::VectorXd& p) { return std::vector<double>(p.data(), p.data() + p.size()); }

std::vector<const ContinuationEntry*> usable(const ContinuationReport& r) {
  std::vector<const ContinuationEntry*> out;
  for (const auto& e : r.records)
    if (e.record.field.basis && e.record.converged) out.push_back(&e);
  return out;
}

double pohozaev_radius(const DomainSpec& d) {
  return 0.2 * (d.dim() == 1 ? d.lx() : std::min(d.lx(), d.ly()));
}

}  // namespace

json analyze_report(const ContinuationReport& r, const RunConfig& cfg) {
  json out = json::object();
  const auto good = usable(r);
  out["converged_records"] = good.size();
  if (good.empty()) return out;

  bool increasing = true, closer = true;
  for (std::size_t k = 1; k < good.size(); ++k) {
    increasing = increasing && good[k]->record.mu_eps > good[k - 1]->record.mu_eps;
    closer = closer && good[k]->profile_dist < good[k - 1]->profile_dist;
  }
  out["mu_increasing"] = increasing;
  out["profile_dist_decreasing"] = closer;

  ContinuationReport conv = r;
  conv.records.clear();
  for (const auto* e : good) conv.records.push_back(*e);

  const SequenceCheck mp = mu_power_check(conv);
  out["mu_power"] = {{"values", series_json(mp.values)}, {"flag", mp.flag}};
  const SequenceCheck eb = eps_bound_check(conv);
  out["eps_bound"] = {{"values", series_json(eb.values)}, {"flag", eb.flag}};

  try {
    const BoundaryBounds bb = boundary_bounds(conv, conv.strip_r);
    json rows = json::array();
    for (const auto& row : bb.rows)
      rows.push_back({{"eps", row.eps}, {"strip_sup", row.strip_sup}, {"interior_L1", row.interior_l1},
                      {"sup_norm", row.sup_norm}});
    out["boundary"] = {{"strip_r", conv.strip_r},         {"rows", rows},
                       {"strip_ratio", bb.strip_ratio},   {"interior_ratio", bb.interior_ratio},
                       {"sup_growth", bb.sup_growth},     {"flag", bb.flag}};
  } catch (const Error& e) {
    out["boundary"] = {{"error", to_string(e.code())}};
  }

  const RieszWeights w = cached_weights(r.domain, r.base.mu, cache_directory(""));
  const double rp = pohozaev_radius(r.domain);
  json poh = json::array();
  for (const auto* e : good) {
    try {
      const PohozaevBalance pb = pohozaev_balance(e->record, e->record.params, w, rp);
      poh.push_back({{"eps", e->eps},
                     {"interior_term", pb.interior_term},
                     {"remainder_terms", pb.remainder_terms},
                     {"remainder_sum", pb.remainder_sum},
                     {"relative_gap", pb.relative_gap}});
    } catch (const Error& err) {
      poh.push_back({{"eps", e->eps}, {"error", to_string(err.code())}});
    }
  }
  out["pohozaev"] = {{"r", rp}, {"rows", poh}};

  std::optional<double> robin_value;
  const SolutionRecord& last = good.back()->record;
  if (cfg.robin && r.base.regime != Regime::FreeSpace) {
    const EigenBasis gb = green_basis(r.domain, config_green_modes(cfg));
    try {
      const auto [x0, cell] = locate_robin_critical_point(gb, r.base.s, last.argmax);
      const RobinValue rv = robin(gb, r.base.s, x0);
      robin_value = rv.value;
      const Eigen::VectorXd off = (last.argmax - x0).cwiseAbs();
      bool within = off(0) <= r.domain.hx() + cell;
      if (r.domain.dim() == 2) within = within && off(1) <= r.domain.hy() + cell;
      out["robin"] = {{"x0", point_json(x0)},
                      {"locator_cell", cell},
                      {"value", rv.value},
                      {"tail_estimate", rv.tail_estimate},
                      {"spread", rv.spread},
                      {"green_modes", gb.size()},
                      {"argmax", point_json(last.argmax)},
                      {"argmax_offset", point_json(off)},
                      {"argmax_within_cell", within}};
      json gl = json::array();
      for (const auto* e : {good.front(), good.back()}) {
        const GreenLimit g =
            green_limit_check(e->record, gb, r.base.s, x0, green_sample_points(r.domain, x0));
        json rows = json::array();
        for (const auto& row : g.rows)
          rows.push_back({{"x", point_json(row.x)},
                          {"scaled_u", row.scaled_u},
                          {"green_term", row.green_term},
                          {"ratio", row.ratio}});
        gl.push_back({{"eps", e->eps}, {"median_ratio", g.median_ratio}, {"rows", rows}});
        if (good.size() == 1) break;
      }
      out["green_limit"] = gl;
    } catch (const Error& e) {
      out["robin"] = {{"error", to_string(e.code())}, {"message", e.what()}};
    }
  }
  if (r.base.regime != Regime::FreeSpace) {
    try {
      const RateLaw rl = r.base.regime == Regime::BrezisNirenberg ? rate_law_bn(conv, robin_value)
                                                                  : rate_law_subcritical(conv, robin_value);
      double tail = 0.0;
      const std::size_t m = rl.lhs.size(), from = m >= 3 ? m - 3 : 0;
      for (std::size_t k = from; k < m; ++k) tail += rl.lhs[k].second / double(m - from);
      out["rate_law"] = {{"lhs", series_json(rl.lhs)},
                         {"rhs", rl.rhs},
                         {"spread_last3", rl.spread_last3},
                         {"lhs_over_rhs", tail / rl.rhs}};
    } catch (const Error& e) {
      out["rate_law"] = {{"error", to_string(e.code())}};
    }
  }
  return out;
}

json report_document(const ContinuationReport& r, const RunConfig& cfg) {
  json j;
  j["schema_version"] = 1;
  j["config"] = serialize_config(cfg);
  j["params"] = to_json(r.base);
  j["domain"] = to_json(r.domain);
  j["modes"] = r.modes;
  j["window"] = r.window;
  j["strip_r"] = r.strip_r;
  j["records"] = json::array();
  for (const auto& e : r.records) j["records"].push_back(to_json(e));
  j["diagnostics"] = analyze_report(r, cfg);
  return j;
}

json strip_timing(json j) {
  if (j.is_object()) {
    j.erase("wall_time");
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

namespace {

void print_error(ErrorCode code, const std::string& what) {
  std::cerr << json{{"error", to_string(code)}, {"message", what}}.dump() << "\n";
}

Params cli_params(int n, double s, double mu) {
  return make_params(n, s, mu, 0.0, Regime::FreeSpace);
}

int cmd_constants(int n, double s, double mu, bool as_json) {
  const Params p = cli_params(n, s, mu);
  const auto list = applicable_constants(p);
  if (as_json) {
    json j = json::object();
    for (const auto& [k, v] : list) j[tag(k)] = v;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& [k, v] : list) std::cout << tag(k) << " " << fmt12(v) << "\n";
  }
  return 0;
}

int cmd_bubble_check(int n, double s, double mu, int points) {
  const Bubble w = standard_profile(cli_params(n, s, mu));
  std::cout << "x,LHS,RHS,residual\n";
  for (int k = 0; k < points; ++k) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x(0) = 3.0 * k / std::max(1, points - 1);
    const ConvolutionCheck c = convolution_identity(w, x);
    std::cout << fmt12(x(0)) << "," << fmt12(c.lhs) << "," << fmt12(c.rhs) << "," << fmt12(c.residual) << "\n";
  }
  return 0;
}

int cmd_bubble_quotient(int n, double s, double mu) {
  const QuotientResult q = hls_quotient(standard_profile(cli_params(n, s, mu)));
  std::cout << "quotient " << fmt12(q.quotient) << "\ntail_bound " << fmt12(q.tail_bound) << "\n";
  return 0;
}

struct RobinArgs {
  std::string domain = "interval";
  double a = 0, b = 1, c = 0, d = 1, s = 0.3;
  int modes = 20000, grid = 32;
  std::string out = "robin.csv";
};

int cmd_robin(const RobinArgs& ra) {
  const DomainSpec geo = ra.domain == "interval" ? DomainSpec::interval(ra.a, ra.b, 16)
                                                 : DomainSpec::rectangle(ra.a, ra.b, ra.c, ra.d, 16);
  if (ra.domain != "interval" && ra.domain != "rectangle")
    fail(ErrorCode::Precondition, "domain must be interval or rectangle");
  const EigenBasis gb = green_basis(geo, ra.modes);
  const DomainSpec grid = geo.dim() == 1 ? DomainSpec::interval(ra.a, ra.b, ra.grid)
                                         : DomainSpec::rectangle(ra.a, ra.b, ra.c, ra.d, ra.grid);
  std::ostringstream os;
  os << (geo.dim() == 1 ? "x" : "x,y") << ",phi,tail_estimate,extrapolation_spread\n";
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    if (grid.is_boundary_node(k)) continue;
    const Eigen::VectorXd x = grid.point(k);
    os << fmt12(x(0)) << ",";
    if (geo.dim() == 2) os << fmt12(x(1)) << ",";
    try {
      const RobinValue v = robin(gb, ra.s, x);
      os << fmt12(v.value) << "," << fmt12(v.tail_estimate) << "," << fmt12(v.spread) << "\n";
    } catch (const Error& e) {
      if (!is_numerical(e.code()) && e.code() != ErrorCode::UnderResolved) throw;
      os << "nan,nan,nan\n";
    }
  }
  write_text(ra.out, os.str());
  return 0;
}

int cmd_solve(const std::string& config, const std::string& out_dir) {
  const RunConfig cfg = load_config(config);
  for (const auto& w : cfg.warnings) std::cerr << json{{"warning", w}}.dump() << "\n";
  const Params p = config_params(cfg, cfg.eps);
  const DomainSpec d = config_domain(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  auto basis = std::make_shared<const EigenBasis>(build_basis(d, cfg.modes));
  const RieszWeights w = cached_weights(d, p.mu, cache_directory((fs::path(out_dir) / "weights").string()));
  const SolutionRecord rec = solve(p, basis, w, config_solve_options(cfg));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json j = to_json(rec);
  j["config"] = serialize_config(cfg);
  j["domain"] = to_json(d);
  j["wall_time"] = wall;
  fs::create_directories(out_dir);
  write_text((fs::path(out_dir) / "record.json").string(), j.dump(2) + "\n");
  write_field_csv(rec.samples, (fs::path(out_dir) / "field.csv").string());
  j.erase("coeffs");
  j.erase("residual_trace");
  std::cout << j.dump(2) << "\n";
  if (!rec.converged) {
    print_error(rec.status == "PositivityLost" ? ErrorCode::PositivityLost : ErrorCode::NoConvergence,
                "solve ended with status " + rec.status);
    return 2;
  }
  return 0;
}

std::vector<double> parse_eps(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::TypeError, "eps list entry '" + item + "'");
    }
  }
  return out;
}

int cmd_continuation(const std::string& config, const std::string& eps_text, const std::string& out_dir) {
  RunConfig cfg = load_config(config);
  for (const auto& w : cfg.warnings) std::cerr << json{{"warning", w}}.dump() << "\n";
  if (!eps_text.empty()) cfg.eps_list = parse_eps(eps_text);
  if (cfg.eps_list.empty()) fail(ErrorCode::MissingRequired, "eps list (--eps or eps_list)");
  const Params base = config_params(cfg, cfg.eps_list.front());
  const DomainSpec d = config_domain(cfg);
  ContinuationOptions co;
  co.solve = config_solve_options(cfg);
  co.modes = cfg.modes;
  co.window = cfg.window;
  co.strip_r = cfg.strip_r;
  fs::create_directories(out_dir);
  const RieszWeights w = cached_weights(d, base.mu, cache_directory((fs::path(out_dir) / "weights").string()));
  int idx = 0;
  co.on_record = [&](const SolutionRecord& rec) {
    std::cerr << "eps=" << fmt12(rec.params.eps) << " status=" << rec.status << " iterations=" << rec.iterations
              << " sup=" << fmt12(rec.sup_norm) << "\n";
    write_field_csv(rec.samples, (fs::path(out_dir) / ("field_" + std::to_string(idx++) + ".csv")).string());
  };
  const ContinuationReport rep = continuation(base, d, cfg.eps_list, co, &w);
  write_text((fs::path(out_dir) / "run.cfg").string(), serialize_config(cfg));
  write_text((fs::path(out_dir) / "report.json").string(), report_document(rep, cfg).dump(2) + "\n");
  write_summary_csv(rep, (fs::path(out_dir) / "summary.csv").string());
  for (const auto& e : rep.records)
    if (!e.record.converged) {
      print_error(ErrorCode::NoConvergence, "record eps=" + fmt12(e.eps) + " ended with status " + e.status);
      return 2;
    }
  return 0;
}

void write_series_csv(const std::string& path, const std::string& header, const Series& s) {
  std::ostringstream os;
  os << header << "\n";
  for (const auto& [x, y] : s) os << fmt12(x) << "," << fmt12(y) << "\n";
  write_text(path, os.str());
}

Series to_series(const json& j) {
  Series s;
  for (const auto& p : j) s.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return s;
}

int cmd_report(const std::string& in, const std::string& out_dir) {
  const std::string file = fs::is_directory(in) ? (fs::path(in) / "report.json").string() : in;
  const json doc = json::parse(read_text(file));
  const RunConfig cfg = parse_config(doc.at("config").get<std::string>());
  const ContinuationReport rep = report_from_json(doc);
  const json diag = analyze_report(rep, cfg);
  fs::create_directories(out_dir);
  auto path = [&](const std::string& f) { return (fs::path(out_dir) / f).string(); };
  write_summary_csv(rep, path("summary.csv"));
  write_text(path("diagnostics.json"), diag.dump(2) + "\n");

  Series mu, prof, sup;
  for (const auto& e : rep.records) {
    if (!e.record.converged) continue;
    mu.emplace_back(e.eps, e.record.mu_eps);
    prof.emplace_back(e.eps, e.profile_dist);
    sup.emplace_back(e.eps, e.record.sup_norm);
  }
  write_series_csv(path("mu_eps.csv"), "eps,mu_eps", mu);
  write_text(path("mu_eps.svg"), render_svg({"blow-up height", "eps", "mu_eps", true, true, {{"mu_eps", mu}}}));
  write_series_csv(path("profile_dist.csv"), "eps,profile_dist", prof);
  write_text(path("profile_dist.svg"),
             render_svg({"distance to the standard profile", "eps", "max |v - W|", true, true, {{"profile", prof}}}));
  if (diag.contains("mu_power")) {
    const Series s = to_series(diag["mu_power"]["values"]);
    write_series_csv(path("mu_power.csv"), "eps,mu_eps_pow_eps", s);
    write_text(path("mu_power.svg"), render_svg({"mu_eps^eps", "eps", "mu_eps^eps", true, false, {{"mu^eps", s}}}));
  }
  if (diag.contains("eps_bound")) {
    const Series s = to_series(diag["eps_bound"]["values"]);
    write_series_csv(path("eps_bound.csv"), "eps,value", s);
    write_text(path("eps_bound.svg"), render_svg({"eps-weighted height", "eps", "value", true, true, {{"bound", s}}}));
  }
  if (diag.contains("rate_law") && diag["rate_law"].contains("lhs")) {
    const Series s = to_series(diag["rate_law"]["lhs"]);
    const double rhs = diag["rate_law"]["rhs"];
    Series r;
    for (const auto& [x, y] : s) r.emplace_back(x, rhs);
    write_series_csv(path("rate_law.csv"), "eps,lhs", s);
    write_text(path("rate_law.svg"), render_svg({"rate law", "eps", "value", true, true, {{"lhs", s}, {"rhs", r}}}));
  }
  if (diag.contains("boundary") && diag["boundary"].contains("rows")) {
    Series strip, mass;
    std::ostringstream os;
    os << "eps,strip_sup,interior_L1,sup_norm\n";
    for (const auto& row : diag["boundary"]["rows"]) {
      const double e = row["eps"];
      strip.emplace_back(e, row["strip_sup"].get<double>());
      mass.emplace_back(e, row["interior_L1"].get<double>());
      os << fmt12(e) << "," << fmt12(row["strip_sup"]) << "," << fmt12(row["interior_L1"]) << ","
         << fmt12(row["sup_norm"]) << "\n";
    }
    write_text(path("boundary.csv"), os.str());
    write_text(path("boundary.svg"), render_svg({"boundary strip and interior mass", "eps", "value", true, true,
                                                 {{"strip sup", strip}, {"interior L1", mass}, {"sup", sup}}}));
  }
  if (diag.contains("pohozaev")) {
    Series gap;
    for (const auto& row : diag["pohozaev"]["rows"])
      if (row.contains("relative_gap")) gap.emplace_back(row["eps"].get<double>(), row["relative_gap"].get<double>());
    write_series_csv(path("pohozaev.csv"), "eps,relative_gap", gap);
    write_text(path("pohozaev.svg"), render_svg({"interior term / remainders", "eps", "ratio", true, false, {{"gap", gap}}}));
  }
  if (diag.contains("green_limit")) {
    std::ostringstream os;
    os << "eps,x,scaled_u,green_term,ratio\n";
    for (const auto& g : diag["green_limit"])
      for (const auto& row : g["rows"]) {
        std::string x;
        for (const auto& c : row["x"]) x += (x.empty() ? "" : " ") + fmt12(c);
        os << fmt12(g["eps"]) << "," << x << "," << fmt12(row["scaled_u"]) << "," << fmt12(row["green_term"]) << ","
           << fmt12(row["ratio"]) << "\n";
      }
    write_text(path("green_limit.csv"), os.str());
  }
  Chart trace{"residual history", "iteration", "relative residual", false, true, {}};
  std::ostringstream os;
  os << "eps,iteration,residual\n";
  for (const auto& e : rep.records) {
    Series s;
    for (std::size_t k = 0; k < e.record.residual_trace.size(); ++k) {
      s.emplace_back(double(k + 1), e.record.residual_trace[k]);
      os << fmt12(e.eps) << "," << k + 1 << "," << fmt12(e.record.residual_trace[k]) << "\n";
    }
    trace.lines.push_back({"eps=" + fmt12(e.eps), s});
  }
  write_text(path("residual_trace.csv"), os.str());
  write_text(path("residual_trace.svg"), render_svg(trace));
  return 0;
}

// Quick examples with closed-form or constructed answers.
int cmd_selftest() {
  std::vector<std::pair<std::string, std::function<bool()>>> checks;
  auto throws = [](ErrorCode code, const std::function<void()>& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code() == code;
    }
    return false;
  };
  auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };
  const double pi = std::numbers::pi;

  checks.emplace_back("params accepted (1,0.3,0.4,0.1,subcritical)", [] {
    make_params(1, 0.3, 0.4, 0.1, Regime::SubcriticalHartree);
    return true;
  });
  checks.emplace_back("params rejected n >= 6s", [&] {
    return throws(ErrorCode::OutOfRange, [] { make_params(2, 0.3, 1.0, 0.0, Regime::SubcriticalHartree); });
  });
  checks.emplace_back("params accepted (3,0.5,1.5,0.05,bn)", [] {
    make_params(3, 0.5, 1.5, 0.05, Regime::BrezisNirenberg);
    return true;
  });
  checks.emplace_back("exponents n=2 s=0.5 mu=1", [&] {
    const Exponents e = exponents(make_params(2, 0.5, 1.0, 0.0, Regime::FreeSpace));
    return near(e.two_sharp, 4, 1e-14) && near(e.two_star, 3, 1e-14) && near(e.p_sub, 3, 1e-14);
  });
  checks.emplace_back("exponents n=1 s=0.3 eps=0.1", [&] {
    const Exponents e = exponents(make_params(1, 0.3, 0.4, 0.1, Regime::SubcriticalHartree));
    return near(e.two_sharp, 5, 1e-13) && near(e.two_star, 4, 1e-13) && near(e.p_sub, 3.9, 1e-13);
  });
  checks.emplace_back("gamma values", [&] {
    return near(gamma(1), 1, 1e-15) && near(gamma(5), 24, 1e-14) && near(gamma(0.5), std::sqrt(pi), 1e-14);
  });
  checks.emplace_back("sphere area n=3", [&] { return near(sphere_area(3), 4 * pi, 1e-14); });
  checks.emplace_back("bubble scaling lambda=2", [&] {
    const Params p = make_params(2, 0.5, 1.0, 0.0, Regime::FreeSpace);
    Eigen::VectorXd c(2), x(2);
    c << 0.1, -0.2;
    x << 0.7, 0.3;
    const Bubble b1 = make_bubble(BubbleFamily::HartreeW, p, c, 1.0);
    const Bubble b2 = make_bubble(BubbleFamily::HartreeW, p, c, 2.0);
    return near(eval(b2, x), std::pow(2.0, 0.5) * eval(b1, c + 2.0 * (x - c)), 1e-13);
  });
  checks.emplace_back("kelvin self-reciprocity n=2", [&] {
    const Params p = make_params(2, 0.5, 1.0, 0.0, Regime::FreeSpace);
    const Bubble w = standard_profile(p);
    const PointFunction f = [w](const Eigen::VectorXd& x) { return eval(w, x); };
    Eigen::VectorXd x(2);
    x << 2.0, 0.0;
    return near(kelvin(f, p)(x), f(x), 1e-13);
  });
  checks.emplace_back("kelvin of 1 in 1-D", [&] {
    const Params p = make_params(1, 0.3, 0.4, 0.0, Regime::FreeSpace);
    const PointFunction one = [](const Eigen::VectorXd&) { return 1.0; };
    Eigen::VectorXd x(1);
    x << 0.5;
    return near(kelvin(one, p)(x), std::pow(0.5, -0.4), 1e-13);
  });
  checks.emplace_back("degenerate bubble scale", [&] {
    return throws(ErrorCode::DegenerateScale, [] {
      make_bubble(BubbleFamily::HartreeW, make_params(1, 0.3, 0.4, 0.0, Regime::FreeSpace),
                  Eigen::VectorXd::Zero(1), 0.0);
    });
  });
  checks.emplace_back("kernel not integrable on interval", [&] {
    return throws(ErrorCode::KernelNotIntegrable, [] { build_weights(DomainSpec::interval(0, 1, 32), 1.2); });
  });
  checks.emplace_back("convolution of zero", [] {
    const RieszWeights w = build_weights(DomainSpec::interval(0, 1, 32), 0.4);
    return w.apply(Eigen::VectorXd::Zero(33)).norm() == 0.0;
  });
  checks.emplace_back("interval eigenvalues", [&] {
    const EigenBasis b = build_basis(DomainSpec::interval(0, 1, 16), 3);
    return near(b.lambdas()(0), pi * pi, 1e-14) && near(b.lambdas()(1), 4 * pi * pi, 1e-14) &&
           near(b.lambdas()(2), 9 * pi * pi, 1e-14);
  });
  checks.emplace_back("square first eigenvalue", [&] {
    return near(build_basis(DomainSpec::rectangle(0, 1, 0, 1, 16), 4).lambdas()(0), 2 * pi * pi, 1e-14);
  });
  checks.emplace_back("under-resolved basis", [&] {
    return throws(ErrorCode::UnderResolved, [] { build_basis(DomainSpec::interval(0, 1, 16), 9); });
  });
  checks.emplace_back("green symmetry", [] {
    const EigenBasis b = build_basis(DomainSpec::interval(0, 1, 512), 256);
    Eigen::VectorXd x(1), y(1);
    x << 0.2;
    y << 0.65;
    return green(b, 0.3, x, y).value == green(b, 0.3, y, x).value;
  });
  checks.emplace_back("robin on boundary rejected", [&] {
    return throws(ErrorCode::Precondition, [] {
      const EigenBasis b = build_basis(DomainSpec::interval(0, 1, 64), 32);
      robin(b, 0.3, Eigen::VectorXd::Zero(1));
    });
  });
  checks.emplace_back("critical point of a parabola", [] {
    const DomainSpec d = DomainSpec::interval(0, 1, 100);
    Eigen::VectorXd v(101);
    for (int i = 0; i <= 100; ++i) v(i) = std::pow(d.x(i) - 0.3, 2);
    const auto pts = critical_points(GridField(d, v));
    return std::abs(pts.front()(0) - 0.3) <= d.hx() + 1e-12;
  });
  checks.emplace_back("subcritical eps=0 rejected", [&] {
    return throws(ErrorCode::OutOfRange, [] { make_params(1, 0.3, 0.4, 0.0, Regime::SubcriticalHartree); }) ||
           throws(ErrorCode::Precondition, [] {
             const Params p = make_params(1, 0.3, 0.4, 0.0, Regime::SubcriticalHartree);
             const DomainSpec d = DomainSpec::interval(0, 1, 64);
             auto b = std::make_shared<const EigenBasis>(build_basis(d, 16));
             solve_subcritical(p, b, build_weights(d, 0.4), {});
           });
  });
  checks.emplace_back("resonant eps", [&] {
    return throws(ErrorCode::ResonantEps, [] {
      const DomainSpec d = DomainSpec::rectangle(0, 1, 0, 1, 16);
      auto b = std::make_shared<const EigenBasis>(build_basis(d, 4));
      const double l1 = std::pow(b->lambdas()(0), 0.45);
      solve_bn(make_params(2, 0.45, 1.2, l1, Regime::BrezisNirenberg), b, build_weights(d, 1.2), {});
    });
  });
  checks.emplace_back("zero-field residual", [] {
    const DomainSpec d = DomainSpec::interval(0, 1, 64);
    auto b = std::make_shared<const EigenBasis>(build_basis(d, 16));
    const ResidualValue r = residual({b, Eigen::VectorXd::Zero(16)},
                                     make_params(1, 0.3, 0.4, 0.1, Regime::SubcriticalHartree),
                                     build_weights(d, 0.4));
    return r.zero_field && r.value == 0.0;
  });
  checks.emplace_back("empty continuation", [] {
    ContinuationOptions o;
    o.modes = 16;
    return continuation(make_params(1, 0.3, 0.4, 0.1, Regime::SubcriticalHartree), DomainSpec::interval(0, 1, 64),
                        {}, o)
        .records.empty();
  });
  checks.emplace_back("non-monotone eps list", [&] {
    return throws(ErrorCode::Precondition, [] {
      ContinuationOptions o;
      o.modes = 16;
      continuation(make_params(1, 0.3, 0.4, 0.1, Regime::SubcriticalHartree), DomainSpec::interval(0, 1, 64),
                   {0.1, 0.2}, o);
    });
  });
  checks.emplace_back("symmetrization of zero", [] {
    const DomainSpec d = DomainSpec::interval(0, 1, 64);
    const Symmetrization s = symmetrization_check(GridField(d, Eigen::VectorXd::Zero(65)), 0.4, build_weights(d, 0.4));
    return s.lhsA == 0.0 && s.lhsB == 0.0 && s.residual == 0.0;
  });
  checks.emplace_back("config round trip", [] {
    const RunConfig c = parse_config("regime=subcritical\nn=1\ns=0.3\neps=0.1\n");
    return parse_config(serialize_config(c)) == c;
  });
  checks.emplace_back("config type error", [&] {
    return throws(ErrorCode::TypeError, [] { parse_config("regime=subcritical\nn=1\ns=two\n"); });
  });
  checks.emplace_back("config duplicate key", [] {
    const RunConfig c = parse_config("regime=subcritical\nn=1\ns=0.3\ns=0.25\n");
    return c.s == 0.25 && c.warnings.size() == 1;
  });

  int failed = 0;
  for (const auto& [name, f] : checks) {
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception& e) {
      std::cout << "  exception: " << e.what() << "\n";
    }
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    failed += ok ? 0 : 1;
  }
  std::cout << checks.size() - failed << "/" << checks.size() << " passed\n";
  return failed ? 1 : 0;
}

}  // namespace

int run_command(int argc, char** argv) {
  CLI::App app{"fractional Hartree blow-up toolkit"};
  app.require_subcommand(1);

  int n = 1;
  double s = 0.3, mu = 0.0;
  bool as_json = false;
  auto* c_const = app.add_subcommand("constants", "print the closed-form constants");
  c_const->add_option("--n", n)->required();
  c_const->add_option("--s", s)->required();
  c_const->add_option("--mu", mu)->required();
  c_const->add_flag("--json", as_json);

  int points = 16;
  auto* c_bub = app.add_subcommand("bubble", "bubble identities");
  c_bub->require_subcommand(1);
  auto* c_check = c_bub->add_subcommand("check", "convolution identity along a ray");
  auto* c_quot = c_bub->add_subcommand("quotient", "HLS quotient of the standard profile");
  for (auto* c : {c_check, c_quot}) {
    c->add_option("--n", n)->required();
    c->add_option("--s", s)->required();
    c->add_option("--mu", mu)->required();
  }
  c_check->add_option("--points", points);

  RobinArgs ra;
  auto* c_rob = app.add_subcommand("robin", "Robin function on a grid");
  c_rob->add_option("--domain", ra.domain);
  c_rob->add_option("--a", ra.a);
  c_rob->add_option("--b", ra.b);
  c_rob->add_option("--c", ra.c);
  c_rob->add_option("--d", ra.d);
  c_rob->add_option("--s", ra.s)->required();
  c_rob->add_option("--modes", ra.modes);
  c_rob->add_option("--grid", ra.grid);
  c_rob->add_option("--out", ra.out);

  std::string config, out = "run", eps_text, in;
  auto* c_solve = app.add_subcommand("solve", "single solve");
  c_solve->add_option("--config", config)->required();
  c_solve->add_option("--out", out);

  auto* c_cont = app.add_subcommand("continuation", "warm-started eps sweep");
  c_cont->add_option("--config", config)->required();
  c_cont->add_option("--eps", eps_text);
  c_cont->add_option("--out", out);

  auto* c_rep = app.add_subcommand("report", "CSV series and SVG charts from report.json");
  c_rep->add_option("--in", in)->required();
  c_rep->add_option("--out", out)->required();

  auto* c_self = app.add_subcommand("selftest", "quick example suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }

  try {
    if (*c_const) return cmd_constants(n, s, mu, as_json);
    if (*c_check) return cmd_bubble_check(n, s, mu, points);
    if (*c_quot) return cmd_bubble_quotient(n, s, mu);
    if (*c_rob) return cmd_robin(ra);
    if (*c_solve) return cmd_solve(config, out);
    if (*c_cont) return cmd_continuation(config, eps_text, out);
    if (*c_rep) return cmd_report(in, out);
    if (*c_self) return cmd_selftest();
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return is_numerical(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Failure"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 1;
}

int run_command(const std::vector<std::string>& args) {
  std::vector<std::string> store = args;
  std::vector<char*> argv;
  for (auto& a : store) argv.push_back(a.data());
  return run_command(int(argv.size()), argv.data());
}

}  // namespace fhl
