#ifndef FHL_CONFIG_HPP
#define FHL_CONFIG_HPP

#include <string>
#include <vector>

#include "fhl/grid.hpp"
#include "fhl/model.hpp"
#include "fhl/solver.hpp"

namespace fhl {

/// Flat key=value run configuration. Unknown keys are rejected; a repeated
/// key keeps its last value and records a warning.
struct RunConfig {
  int schema_version = 1;
  Regime regime = Regime::SubcriticalHartree;
  int n = 1;
  double s = 0.3;
  double mu = 0.0;  // 0: n - 2s
  double eps = 0.0;
  std::string domain_kind = "interval";
  double a = 0.0, b = 1.0, c = 0.0, d = 1.0;
  int modes = 256;
  int grid = 1024;
  Strategy strategy = Strategy::DampedPicard;
  double theta = 0.5;
  double tol = 1e-8;
  int max_iter = 500;
  SeedKind seed = SeedKind::FirstEigenfunction;
  double seed_lambda0 = 10.0;
  Normalization normalization = Normalization::SupNorm;
  double window = 3.0;
  double strip_r = 0.0;
  int green_modes = 0;  // 0: 20000 on an interval, 2^20 on a rectangle
  bool robin = true;
  std::vector<double> eps_list;

  std::vector<std::string> warnings;  // not part of equality

  bool operator==(const RunConfig& o) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Keys accepted by parse_config, in serialization order.
const std::vector<std::string>& config_keys();

Params config_params(const RunConfig& cfg, double eps);
DomainSpec config_domain(const RunConfig& cfg);
SolveOptions config_solve_options(const RunConfig& cfg);
int config_green_modes(const RunConfig& cfg);

}  // namespace fhl

#endif
