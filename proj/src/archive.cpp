#include "fhl/archive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fhl/error.hpp"

namespace fhl {

std::string fmt12(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

json to_json(const Params& p) {
  return {{"n", p.n}, {"s", p.s}, {"mu", p.mu}, {"eps", p.eps}, {"regime", to_string(p.regime)}};
}

json to_json(const DomainSpec& d) {
  json j = {{"kind", d.dim() == 1 ? "interval" : "rectangle"}, {"a", d.ax}, {"b", d.bx}, {"N", d.N}};
  if (d.dim() == 2) {
    j["c"] = d.ay;
    j["d"] = d.by;
  }
  return j;
}

namespace {

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd unvec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

}  // namespace

json to_json(const SolutionRecord& r, bool with_coeffs) {
  json j = {{"params", to_json(r.params)},
            {"status", r.status},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"residual", r.residual},
            {"sup_norm", r.sup_norm},
            {"sup_interp", r.sup_interp},
            {"argmax", vec(r.argmax)},
            {"mu_eps", r.mu_eps},
            {"quotient", r.quotient},
            {"min_interior", r.min_interior},
            {"positive", r.positive},
            {"theta_used", r.theta_used},
            {"residual_trace", r.residual_trace}};
  if (with_coeffs && r.field.basis) {
    j["modes"] = r.field.basis->size();
    j["coeffs"] = vec(r.field.coeffs);
  }
  return j;
}

json to_json(const ContinuationEntry& e) {
  json j = to_json(e.record);
  j["eps"] = e.eps;
  j["entry_status"] = e.status;
  j["mu_pow_eps"] = e.mu_pow_eps;
  j["profile_dist"] = e.profile_dist;
  j["boundary_sup"] = e.boundary_sup;
  j["interior_L1"] = e.interior_l1;
  j["rate_lhs"] = e.rate_lhs;
  j["wall_time"] = e.wall_time;
  return j;
}

Params params_from_json(const json& j) {
  Params p;
  p.n = j.at("n").get<int>();
  p.s = j.at("s").get<double>();
  p.mu = j.at("mu").get<double>();
  p.eps = j.at("eps").get<double>();
  p.regime = regime_from_string(j.at("regime").get<std::string>());
  return p;
}

DomainSpec domain_from_json(const json& j) {
  if (j.at("kind") == "interval")
    return DomainSpec::interval(j.at("a"), j.at("b"), j.at("N"));
  return DomainSpec::rectangle(j.at("a"), j.at("b"), j.at("c"), j.at("d"), j.at("N"));
}

ContinuationReport report_from_json(const json& j) {
  ContinuationReport r;
  r.base = params_from_json(j.at("params"));
  r.domain = domain_from_json(j.at("domain"));
  r.modes = j.at("modes");
  r.window = j.at("window");
  r.strip_r = j.at("strip_r");
  auto basis = std::make_shared<const EigenBasis>(build_basis(r.domain, r.modes));
  for (const auto& rj : j.at("records")) {
    ContinuationEntry e;
    e.eps = rj.at("eps");
    e.status = rj.at("entry_status");
    e.wall_time = rj.value("wall_time", 0.0);
    SolutionRecord& rec = e.record;
    rec.params = params_from_json(rj.at("params"));
    rec.status = rj.at("status");
    rec.converged = rj.at("converged");
    rec.iterations = rj.at("iterations");
    rec.residual = rj.at("residual");
    rec.quotient = rj.at("quotient");
    rec.theta_used = rj.at("theta_used");
    rec.residual_trace = rj.at("residual_trace").get<std::vector<double>>();
    if (rj.contains("coeffs")) {
      rec.field = {basis, unvec(rj.at("coeffs"))};
      RieszWeights none;
      summarize(rec, none);
      derive_entry(e, r);
    }
    r.records.push_back(std::move(e));
  }
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::Io, "cannot write " + path);
  os << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_field_csv(const GridField& f, const std::string& path) {
  std::ostringstream os;
  const DomainSpec& d = f.domain;
  os << (d.dim() == 1 ? "x,u\n" : "x,y,u\n");
  for (Eigen::Index k = 0; k < f.values.size(); ++k) {
    const Eigen::VectorXd p = d.point(k);
    os << fmt12(p(0)) << ",";
    if (d.dim() == 2) os << fmt12(p(1)) << ",";
    os << fmt12(f.values(k)) << "\n";
  }
  write_text(path, os.str());
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {"eps",          "mu_eps",   "mu_eps_pow_eps",
                                                "x_eps",        "profile_dist", "rate_lhs",
                                                "boundary_sup", "interior_L1"};
  return cols;
}

void write_summary_csv(const ContinuationReport& r, const std::string& path) {
  std::ostringstream os;
  const auto& cols = summary_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << "\n";
  for (const auto& e : r.records) {
    std::string x;
    for (Eigen::Index k = 0; k < e.record.argmax.size(); ++k)
      x += (k ? " " : "") + fmt12(e.record.argmax(k));
    os << fmt12(e.eps) << "," << fmt12(e.record.mu_eps) << "," << fmt12(e.mu_pow_eps) << "," << x << ","
       << fmt12(e.profile_dist) << "," << fmt12(e.rate_lhs) << "," << fmt12(e.boundary_sup) << ","
       << fmt12(e.interior_l1) << "\n";
  }
  write_text(path, os.str());
}

std::string render_svg(const Chart& c) {
  const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto tx = [&](double v) { return c.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return c.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(tx(x)) && std::isfinite(ty(y));
  };
  for (const auto& [name, s] : c.lines)
    for (const auto& [x, y] : s) {
      if (!usable(x, y)) continue;
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  auto px = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << c.title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  auto label = [&](double v, bool lg) { return fmt12(lg ? std::pow(10.0, v) : v).substr(0, 10); };
  os << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << label(x0, c.log_x) << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
     << label(x1, c.log_x) << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">"
     << label(y0, c.log_y) << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
     << label(y1, c.log_y) << "</text>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << c.xlabel
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << H / 2
     << ")\" text-anchor=\"middle\">" << c.ylabel << "</text>\n";
  int k = 0;
  for (const auto& [name, s] : c.lines) {
    const char* col = colors[k % 5];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : s)
      if (usable(x, y)) os << px(x) << "," << py(y) << " ";
    os << "\"/>\n";
    for (const auto& [x, y] : s)
      if (usable(x, y)) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" font-size=\"11\" text-anchor=\"end\" fill=\""
       << col << "\">" << name << "</text>\n";
    ++k;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fhl
