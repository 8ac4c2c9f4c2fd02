#ifndef FHL_BUBBLES_HPP
#define FHL_BUBBLES_HPP

#include <Eigen/Dense>
#include <functional>

#include "fhl/grid.hpp"
#include "fhl/model.hpp"

namespace fhl {

enum class BubbleFamily { SobolevU, HartreeW };

struct Bubble {
  BubbleFamily family = BubbleFamily::HartreeW;
  Eigen::VectorXd center;
  double scale = 1.0;
  Params params;
  double amplitude = 0.0;  // c_{n,s} for U, alpha_{n,mu,s} for W
};

using PointFunction = std::function<double(const Eigen::VectorXd&)>;

Bubble make_bubble(BubbleFamily family, const Params& p, const Eigen::VectorXd& center,
                   double scale);
/// W[0,1] with amplitude alpha_{n,s}: the limit profile of the rescaled solutions.
Bubble standard_profile(const Params& p);

double eval(const Bubble& b, const Eigen::VectorXd& x);
double eval_radial(const Bubble& b, double r);

/// x -> |x|^{-(n-2s)} f(x/|x|^2).
PointFunction kelvin(PointFunction f, const Params& p);

struct ConvolutionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double error_estimate = 0.0;
};

/// (|.|^{-mu} * W^{two_star})(x) against beta_tilde W^{two_sharp - two_star}(x).
ConvolutionCheck convolution_identity(const Bubble& w, const Eigen::VectorXd& x);
double convolution_identity_residual(const Bubble& w, const Eigen::VectorXd& x);

struct QuotientResult {
  double quotient = 0.0;
  double integral = 0.0;    // int W^{two_sharp}
  double tail_bound = 0.0;  // relative size of the r > R contribution
};

QuotientResult hls_quotient(const Bubble& w);

/// v(x) = mu^{-1} u(mu^{-beta} x + argmax), mu = sup_norm / alpha_{n,s},
/// sampled on a grid centred at 0 covering |x| <= half_width.
GridField rescale(const GridField& u, double sup_norm, const Eigen::VectorXd& argmax,
                  const Params& p, double half_width = 5.0, int min_cells = 128);

double profile_distance(const GridField& v, const Params& p, double window);

}  // namespace fhl

#endif
