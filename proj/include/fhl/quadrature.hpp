#ifndef FHL_QUADRATURE_HPP
#define FHL_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

namespace fhl::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

// Gauss-Kronrod 7/15 nodes on [-1,1] (non-negative half).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Result gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  Result r;
  r.value = rk * h;
  r.error = std::abs((rk - rg) * h);
  r.evaluations = 15;
  return r;
}

/// Globally adaptive G7K15 on [a,b]; the interval with the largest error
/// estimate is bisected until |err| <= max(abs_tol, rel_tol*|I|).
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 0.0, int max_intervals = 4000) {
  struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  if (a == b) return {};
  std::priority_queue<Piece> heap;
  Result first = gk15(f, a, b);
  heap.push({a, b, first.value, first.error});
  double total = first.value, err = first.error;
  int evals = first.evaluations, count = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && count < max_intervals) {
    Piece p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > std::min(p.a, p.b) && m < std::max(p.a, p.b))) {
      heap.push(p);
      break;
    }
    Result l = gk15(f, p.a, m), r = gk15(f, m, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    evals += 30;
    heap.push({p.a, m, l.value, l.error});
    heap.push({m, p.b, r.value, r.error});
    ++count;
  }
  // Re-sum in a fixed order to drop the running-update drift.
  std::vector<Piece> pieces;
  pieces.reserve(heap.size());
  while (!heap.empty()) {
    pieces.push_back(heap.top());
    heap.pop();
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& x, const Piece& y) { return x.a < y.a; });
  total = 0.0;
  err = 0.0;
  for (const auto& p : pieces) {
    total += p.value;
    err += p.error;
  }
  Result out;
  out.value = total;
  out.error = err;
  out.evaluations = evals;
  out.converged = err <= std::max(abs_tol, rel_tol * std::abs(total)) * 1.0000001;
  return out;
}

/// Integral over [a, inf) of f, where f(r) ~ r^{-(1+decay)} at infinity.
/// Uses r = a * v^{-1/decay}, which maps the tail onto (0,1] with a
/// bounded integrand.
template <class F>
Result integrate_tail(F&& f, double a, double decay, double rel_tol = 1e-12,
                      double abs_tol = 0.0) {
  auto g = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double r = a * std::pow(v, -1.0 / decay);
    return f(r) * r / (decay * v);
  };
  return integrate(g, 0.0, 1.0, rel_tol, abs_tol);
}

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w);

}  // namespace fhl::quad

#endif
