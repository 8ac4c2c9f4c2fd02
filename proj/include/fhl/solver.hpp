#ifndef FHL_SOLVER_HPP
#define FHL_SOLVER_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fhl/grid.hpp"
#include "fhl/model.hpp"
#include "fhl/riesz.hpp"
#include "fhl/spectral.hpp"

namespace fhl {

enum class Strategy { DampedPicard, NormalizedGradientFlow };
enum class Normalization { SupNorm, NonlocalEnergy };
enum class SeedKind { FirstEigenfunction, BubbleCap, WarmStart };

const char* to_string(Strategy s);
const char* to_string(Normalization n);
const char* to_string(SeedKind k);

struct Seed {
  SeedKind kind = SeedKind::FirstEigenfunction;
  double lambda0 = 10.0;   // BubbleCap scale
  Eigen::VectorXd coeffs;  // WarmStart coefficients on the same basis
};

/// Replacement for the Hartree term N(u) on node values; `degree` is its
/// homogeneity (N(cu) = c^degree N(u)).
struct Nonlinearity {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  double degree = 1.0;
};

struct SolveOptions {
  Strategy strategy = Strategy::DampedPicard;
  double theta = 0.5;
  int max_iter = 500;
  double residual_tol = 1e-8;
  Normalization normalization = Normalization::SupNorm;
  Seed seed;
  std::optional<Nonlinearity> nonlinearity;
  double gradient_step = 0.5;
  double positivity_floor = 0.0;  // relative to sup; 0: 1e-3 in 1-D, 5e-2 in 2-D (truncation ringing)
  int max_halvings = 5;
};

struct SolutionRecord {
  Params params;
  SpectralField field;
  GridField samples;
  double sup_norm = 0.0;
  double sup_interp = 0.0;
  Eigen::VectorXd argmax;
  double mu_eps = 0.0;
  double residual = 0.0;
  double quotient = 0.0;
  double min_interior = 0.0;
  bool positive = false;
  int iterations = 0;
  bool converged = false;
  std::string status;
  double theta_used = 0.0;
  std::vector<double> residual_trace;
};

SolutionRecord solve_subcritical(const Params& p, std::shared_ptr<const EigenBasis> basis,
                                 const RieszWeights& w, const SolveOptions& opts);
SolutionRecord solve_bn(const Params& p, std::shared_ptr<const EigenBasis> basis,
                        const RieszWeights& w, const SolveOptions& opts);
/// Dispatches on p.regime.
SolutionRecord solve(const Params& p, std::shared_ptr<const EigenBasis> basis,
                     const RieszWeights& w, const SolveOptions& opts);

/// Hartree term (K * u_+^q) u_+^{q-1} at every node.
Eigen::VectorXd hartree_term(const Eigen::VectorXd& u, double q, const RieszWeights& w);

struct ResidualValue {
  double value = 0.0;
  bool zero_field = false;
};

/// |D a - P N(u)| / |P N(u)| on coefficients, D = lambda^s (minus eps for BN).
ResidualValue residual(const SpectralField& u, const Params& p, const RieszWeights& w);

double energy_quotient(const SpectralField& u, const Params& p, const RieszWeights& w);

/// Fills sup, argmax, mu_eps, positivity and quotient from the field.
void summarize(SolutionRecord& r, const RieszWeights& w);

}  // namespace fhl

#endif
