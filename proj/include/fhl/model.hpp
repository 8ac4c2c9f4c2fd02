#ifndef FHL_MODEL_HPP
#define FHL_MODEL_HPP

#include <string>

namespace fhl {

enum class Regime { SubcriticalHartree, BrezisNirenberg, FreeSpace };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& name);

struct Params {
  int n = 1;
  double s = 0.3;
  double mu = 0.4;
  double eps = 0.0;
  Regime regime = Regime::FreeSpace;

  bool operator==(const Params&) const = default;
};

struct Exponents {
  double two_sharp;  // 2n/(n-2s)
  double two_star;   // (2n-mu)/(n-2s)
  double p_sub;      // two_sharp - 1 - eps
};

/// Validates raw inputs against the regime inequalities. Throws OutOfRange
/// naming the failing inequality.
Params make_params(int n, double s, double mu, double eps, Regime regime);

Exponents exponents(const Params& p);

/// Exponent of the nonlinearity actually used by the regime's equation.
double nonlinear_power(const Params& p);

/// Dilation exponent (two_sharp - 2 - eps)/(2s) of the rescaling.
double rescale_exponent(const Params& p);

}  // namespace fhl

#endif
