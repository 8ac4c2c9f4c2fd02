#include "fhl/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fhl/error.hpp"

namespace fhl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) fail(ErrorCode::TypeError, key);
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) fail(ErrorCode::TypeError, key);
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorCode::TypeError, key);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

// Shortest text that parses back to the same double.
std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "schema_version", "regime",       "n",        "s",           "mu",      "eps",
      "domain.kind",    "domain.a",     "domain.b", "domain.c",    "domain.d", "modes",
      "grid",           "strategy",     "theta",    "tol",         "max_iter", "seed",
      "seed.lambda0",   "normalization", "window",  "strip_r",     "green_modes", "robin",
      "eps_list"};
  return keys;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return serialize_config(*this) == serialize_config(o);
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::TypeError, "line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    bool known = false;
    for (const auto& k : config_keys()) known = known || k == key;
    if (!known) fail(ErrorCode::UnknownKey, key);
    if (kv.count(key)) cfg.warnings.push_back("duplicate key '" + key + "': last value wins");
    kv[key] = value;
  }
  for (const char* req : {"regime", "n", "s"})
    if (!kv.count(req)) fail(ErrorCode::MissingRequired, req);

  for (const auto& [key, v] : kv) {
    if (key == "schema_version") cfg.schema_version = to_int(key, v);
    else if (key == "regime") {
      if (v == "subcritical") cfg.regime = Regime::SubcriticalHartree;
      else if (v == "bn") cfg.regime = Regime::BrezisNirenberg;
      else if (v == "free") cfg.regime = Regime::FreeSpace;
      else fail(ErrorCode::TypeError, key);
    } else if (key == "n") cfg.n = to_int(key, v);
    else if (key == "s") cfg.s = to_double(key, v);
    else if (key == "mu") cfg.mu = to_double(key, v);
    else if (key == "eps") cfg.eps = to_double(key, v);
    else if (key == "domain.kind") {
      if (v != "interval" && v != "rectangle") fail(ErrorCode::TypeError, key);
      cfg.domain_kind = v;
    } else if (key == "domain.a") cfg.a = to_double(key, v);
    else if (key == "domain.b") cfg.b = to_double(key, v);
    else if (key == "domain.c") cfg.c = to_double(key, v);
    else if (key == "domain.d") cfg.d = to_double(key, v);
    else if (key == "modes") cfg.modes = to_int(key, v);
    else if (key == "grid") cfg.grid = to_int(key, v);
    else if (key == "strategy") {
      if (v == "picard") cfg.strategy = Strategy::DampedPicard;
      else if (v == "gradient_flow") cfg.strategy = Strategy::NormalizedGradientFlow;
      else fail(ErrorCode::TypeError, key);
    } else if (key == "theta") cfg.theta = to_double(key, v);
    else if (key == "tol") cfg.tol = to_double(key, v);
    else if (key == "max_iter") cfg.max_iter = to_int(key, v);
    else if (key == "seed") {
      if (v == "eigen") cfg.seed = SeedKind::FirstEigenfunction;
      else if (v == "bubble") cfg.seed = SeedKind::BubbleCap;
      else fail(ErrorCode::TypeError, key);
    } else if (key == "seed.lambda0") cfg.seed_lambda0 = to_double(key, v);
    else if (key == "normalization") {
      if (v == "sup") cfg.normalization = Normalization::SupNorm;
      else if (v == "energy") cfg.normalization = Normalization::NonlocalEnergy;
      else fail(ErrorCode::TypeError, key);
    } else if (key == "window") cfg.window = to_double(key, v);
    else if (key == "strip_r") cfg.strip_r = to_double(key, v);
    else if (key == "green_modes") cfg.green_modes = to_int(key, v);
    else if (key == "robin") cfg.robin = to_bool(key, v);
    else if (key == "eps_list") cfg.eps_list = to_list(key, v);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "schema_version=" << c.schema_version << "\n";
  os << "regime=" << to_string(c.regime) << "\n";
  os << "n=" << c.n << "\n";
  os << "s=" << fmt(c.s) << "\n";
  os << "mu=" << fmt(c.mu) << "\n";
  os << "eps=" << fmt(c.eps) << "\n";
  os << "domain.kind=" << c.domain_kind << "\n";
  os << "domain.a=" << fmt(c.a) << "\n";
  os << "domain.b=" << fmt(c.b) << "\n";
  os << "domain.c=" << fmt(c.c) << "\n";
  os << "domain.d=" << fmt(c.d) << "\n";
  os << "modes=" << c.modes << "\n";
  os << "grid=" << c.grid << "\n";
  os << "strategy=" << to_string(c.strategy) << "\n";
  os << "theta=" << fmt(c.theta) << "\n";
  os << "tol=" << fmt(c.tol) << "\n";
  os << "max_iter=" << c.max_iter << "\n";
  os << "seed=" << to_string(c.seed) << "\n";
  os << "seed.lambda0=" << fmt(c.seed_lambda0) << "\n";
  os << "normalization=" << to_string(c.normalization) << "\n";
  os << "window=" << fmt(c.window) << "\n";
  os << "strip_r=" << fmt(c.strip_r) << "\n";
  os << "green_modes=" << c.green_modes << "\n";
  os << "robin=" << (c.robin ? "true" : "false") << "\n";
  if (!c.eps_list.empty()) {
    os << "eps_list=";
    for (std::size_t k = 0; k < c.eps_list.size(); ++k) os << (k ? "," : "") << fmt(c.eps_list[k]);
    os << "\n";
  }
  return os.str();
}

Params config_params(const RunConfig& cfg, double eps) {
  const double mu = cfg.mu > 0.0 ? cfg.mu : cfg.n - 2.0 * cfg.s;
  return make_params(cfg.n, cfg.s, mu, eps, cfg.regime);
}

DomainSpec config_domain(const RunConfig& cfg) {
  if (cfg.domain_kind == "interval") return DomainSpec::interval(cfg.a, cfg.b, cfg.grid);
  return DomainSpec::rectangle(cfg.a, cfg.b, cfg.c, cfg.d, cfg.grid);
}

SolveOptions config_solve_options(const RunConfig& cfg) {
  SolveOptions o;
  o.strategy = cfg.strategy;
  o.theta = cfg.theta;
  o.residual_tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.normalization = cfg.normalization;
  o.seed.kind = cfg.seed;
  o.seed.lambda0 = cfg.seed_lambda0;
  return o;
}

int config_green_modes(const RunConfig& cfg) {
  if (cfg.green_modes > 0) return cfg.green_modes;
  return cfg.domain_kind == "interval" ? 20000 : 1 << 20;
}

}  // namespace fhl
