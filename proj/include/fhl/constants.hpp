#ifndef FHL_CONSTANTS_HPP
#define FHL_CONSTANTS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fhl/model.hpp"

namespace fhl {

enum class ConstantKind {
  C_ns,
  C_HLS_sharp,
  Alpha_nmus,
  BetaTilde_nmus,
  Gamma_ns,
  Kappa_s,
  B_ns,
  M_ns,
  F_ns,
  SigmaN,
  b_ns,
  d_ns,
};

const char* tag(ConstantKind kind);
std::optional<ConstantKind> kind_from_tag(const std::string& name);

/// Gamma function for x > 0.
double gamma(double x);

double closed_form(ConstantKind kind, const Params& p);

/// Every constant defined for p, in enum order.
std::vector<std::pair<ConstantKind, double>> applicable_constants(const Params& p);

// Building blocks, exposed for the other modules.
double sphere_area(int n);                          // |S^{n-1}|
double alpha_nmus(int n, double s, double mu);      // bubble amplitude
double beta_tilde(int n, double s, double mu);      // convolution multiplier
double alpha_ns(int n, double s);                   // alpha at mu = n - 2s

/// pi^{n/2} Gamma((n-mu)/2) / Gamma(n - mu/2): (|.|^{-mu} * (1+|.|^2)^{-(2n-mu)/2})(0).
double riesz_bubble_mass(int n, double mu);

}  // namespace fhl

#endif
