#include "fhl/riesz.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <unsupported/Eigen/FFT>
#include <sstream>

#include "fhl/constants.hpp"
#include "fhl/error.hpp"
#include "fhl/quadrature.hpp"

namespace fhl {

namespace {

constexpr std::uint8_t kFormatVersion = 1;
constexpr char kMagic[4] = {'F', 'H', 'L', 'W'};

struct GaussRule {
  std::vector<double> x, w;
  explicit GaussRule(int m) { quad::gauss_legendre(m, x, w); }
};

const GaussRule& rule12() {
  static const GaussRule r(12);
  return r;
}

const GaussRule& rule6() {
  static const GaussRule r(6);
  return r;
}

// Cell moments on [m, m+1] of |d|^{-mu}: I0 = int |d|^{-mu}, I1 = int (d-m)|d|^{-mu}.
void cell_moments(int m, double mu, double& i0, double& i1) {
  if (m >= -2 && m <= 1) {
    auto p0 = [mu](double d) {
      return (d < 0 ? -1.0 : 1.0) * std::pow(std::abs(d), 1.0 - mu) / (1.0 - mu);
    };
    auto p1 = [mu](double d) { return std::pow(std::abs(d), 2.0 - mu) / (2.0 - mu); };
    i0 = p0(m + 1.0) - p0(double(m));
    i1 = p1(m + 1.0) - p1(double(m)) - m * i0;
    return;
  }
  const GaussRule& g = rule12();
  i0 = i1 = 0.0;
  for (std::size_t k = 0; k < g.x.size(); ++k) {
    const double tau = 0.5 * (g.x[k] + 1.0);
    const double v = 0.5 * g.w[k] * std::pow(std::abs(m + tau), -mu);
    i0 += v;
    i1 += v * tau;
  }
}

// J(z) = int_0^z (1+t^2)^{-mu/2} dt.
double jfun(double z, double mu) {
  if (z <= 0.0) return 0.0;
  auto f = [mu](double t) { return std::pow(1.0 + t * t, -0.5 * mu); };
  if (z <= 1.0) return quad::integrate(f, 0.0, z, 1e-15).value;
  auto g = [mu](double u) {
    const double t = std::exp(u);
    return std::pow(1.0 + t * t, -0.5 * mu) * t;
  };
  return quad::integrate(f, 0.0, 1.0, 1e-15).value +
         quad::integrate(g, 0.0, std::log(z), 1e-15).value;
}

// int_0^A int_0^B |z|^{-mu}, split along the diagonal into two polar triangles.
double corner(double a, double b, double mu) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return (std::pow(a, 2.0 - mu) * jfun(b / a, mu) + std::pow(b, 2.0 - mu) * jfun(a / b, mu)) /
         (2.0 - mu);
}

double signed_corner(double x, double y, double mu) {
  const double sx = x < 0 ? -1.0 : 1.0, sy = y < 0 ? -1.0 : 1.0;
  return sx * sy * corner(std::abs(x), std::abs(y), mu);
}

}  // namespace

double rectangle_riesz_integral(double x0, double x1, double y0, double y1, double mu) {
  const double wx = x1 - x0, wy = y1 - y0;
  const double dx = std::max({0.0, x0, -x1}), dy = std::max({0.0, y0, -y1});
  if (std::hypot(dx, dy) > 3.0 * std::max(wx, wy)) {
    const GaussRule& g = rule6();
    double sum = 0.0;
    for (std::size_t a = 0; a < g.x.size(); ++a) {
      const double x = x0 + 0.5 * wx * (g.x[a] + 1.0);
      double row = 0.0;
      for (std::size_t b = 0; b < g.x.size(); ++b) {
        const double y = y0 + 0.5 * wy * (g.x[b] + 1.0);
        row += g.w[b] * std::pow(x * x + y * y, -0.5 * mu);
      }
      sum += g.w[a] * row;
    }
    return 0.25 * wx * wy * sum;
  }
  return signed_corner(x1, y1, mu) - signed_corner(x0, y1, mu) - signed_corner(x1, y0, mu) +
         signed_corner(x0, y0, mu);
}

RieszWeights build_weights(const DomainSpec& d, double mu) {
  if (!(mu > 0.0)) fail(ErrorCode::OutOfRange, "mu must be positive");
  if (!(mu < d.dim()))
    fail(ErrorCode::KernelNotIntegrable, "kernel |x|^{-mu} needs mu < dimension");
  RieszWeights w;
  w.domain_ = d;
  w.mu_ = mu;
  const int N = d.N;
  if (d.dim() == 1) {
    w.scale_ = std::pow(d.hx(), 1.0 - mu);
    w.hat_.resize(2 * N + 1);
    w.left_.resize(2 * N + 1);
    w.right_.resize(2 * N + 1);
    w.cell_.resize(2 * N + 1);
    Eigen::VectorXd i0(2 * N + 2), i1(2 * N + 2);
    for (int m = -N - 1; m <= N; ++m) cell_moments(m, mu, i0(m + N + 1), i1(m + N + 1));
    for (int k = -N; k <= N; ++k) {
      const double l = i0(k + N + 1) - i1(k + N + 1);  // cell [k, k+1]
      const double r = i1(k + N);                      // cell [k-1, k]
      w.left_(k + N) = l;
      w.right_(k + N) = r;
      w.hat_(k + N) = l + r;
      w.cell_(k + N) = i0(k + N + 1);
    }
    w.prepare_fft();
    return w;
  }
  const int M = 2 * N + 1;
  const double hx = d.hx(), hy = d.hy();
  w.table_.resize(Eigen::Index(M) * M);
  for (int q = -N; q <= N; ++q)
    for (int p = -N; p <= N; ++p) {
      const double cx = p * hx, cy = q * hy;
      w.table_(Eigen::Index(q + N) * M + (p + N)) =
          rectangle_riesz_integral(cx - 0.5 * hx, cx + 0.5 * hx, cy - 0.5 * hy, cy + 0.5 * hy, mu);
    }
  return w;
}

Eigen::VectorXd RieszWeights::apply(const Eigen::VectorXd& f) const {
  if (f.size() != domain_.size()) fail(ErrorCode::GridMismatch, "field/grid size mismatch");
  return domain_.dim() == 1 ? apply_1d(f) : apply_2d(f);
}

// Grids from this size on apply the interior Toeplitz part by FFT.
constexpr int kFftMinCells = 512;

void RieszWeights::prepare_fft() {
  hat_fft_.clear();
  if (domain_.dim() != 1 || domain_.N < kFftMinCells) return;
  const int N = domain_.N;
  int L = 1;
  while (L < 2 * N + 1) L *= 2;
  // out_i = sum_j hat(j - i) f_j = sum_j k(i - j) f_j with k(d) = hat(-d)
  std::vector<double> k(L, 0.0);
  for (int d = -N; d <= N; ++d) k[(d + L) % L] = hat_(N - d);
  Eigen::FFT<double> fft;
  fft.fwd(hat_fft_, k);
}

Eigen::VectorXd RieszWeights::apply_1d(const Eigen::VectorXd& f) const {
  const int N = domain_.N;
  Eigen::VectorXd out(N + 1);
  if (!hat_fft_.empty()) {
    const std::size_t L = hat_fft_.size();
    std::vector<double> g(L, 0.0), conv;
    for (int j = 1; j < N; ++j) g[j] = f(j);
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, g);
    for (std::size_t m = 0; m < L; ++m) spec[m] *= hat_fft_[m];
    fft.inv(conv, spec);
    for (int i = 0; i <= N; ++i)
      out(i) = scale_ * (conv[i] + left_(-i + N) * f(0) + right_(N - i + N) * f(N));
    return out;
  }
  const auto inner = f.segment(1, N - 1);
  for (int i = 0; i <= N; ++i) {
    // offsets j - i for j = 1..N-1 start at 1 - i
    double v = hat_.segment(1 - i + N, N - 1).dot(inner);
    v += left_(-i + N) * f(0) + right_(N - i + N) * f(N);
    out(i) = scale_ * v;
  }
  return out;
}

Eigen::VectorXd RieszWeights::apply_cells(const Eigen::VectorXd& c) const {
  const int N = domain_.N;
  if (domain_.dim() != 1 || c.size() != N)
    fail(ErrorCode::GridMismatch, "apply_cells needs N cell values on an interval");
  Eigen::VectorXd out(N + 1);
  for (int i = 0; i <= N; ++i) out(i) = scale_ * cell_.segment(-i + N, N).dot(c);
  return out;
}

Eigen::VectorXd RieszWeights::apply_2d(const Eigen::VectorXd& f) const {
  const int N = domain_.N, m = N + 1, M = 2 * N + 1;
  const double hx = domain_.hx(), hy = domain_.hy();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index(m) * m);
  for (int i2 = 0; i2 <= N; ++i2)
    for (int i1 = 0; i1 <= N; ++i1) {
      double v = 0.0;
      for (int j2 = 1; j2 < N; ++j2) {
        const Eigen::Index row = Eigen::Index(j2 - i2 + N) * M + (1 - i1 + N);
        v += table_.segment(row, N - 1).dot(f.segment(Eigen::Index(j2) * m + 1, N - 1));
      }
      out(Eigen::Index(i2) * m + i1) = v;
    }
  // Clipped cells of boundary nodes; skipped when the boundary data vanish.
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    if (!domain_.is_boundary_node(j) || f(j) == 0.0) continue;
    const int j1 = int(j % m), j2 = int(j / m);
    const double x0 = std::max(domain_.ax, domain_.x(j1) - 0.5 * hx);
    const double x1 = std::min(domain_.bx, domain_.x(j1) + 0.5 * hx);
    const double y0 = std::max(domain_.ay, domain_.y(j2) - 0.5 * hy);
    const double y1 = std::min(domain_.by, domain_.y(j2) + 0.5 * hy);
    for (int i2 = 0; i2 <= N; ++i2)
      for (int i1 = 0; i1 <= N; ++i1) {
        const double tx = domain_.x(i1), ty = domain_.y(i2);
        out(Eigen::Index(i2) * m + i1) +=
            f(j) * rectangle_riesz_integral(x0 - tx, x1 - tx, y0 - ty, y1 - ty, mu_);
      }
  }
  return out;
}

GridField convolve(const RieszWeights& w, const GridField& f) {
  if (!(f.domain == w.domain())) fail(ErrorCode::GridMismatch, "field is not on the weights' grid");
  return GridField(f.domain, w.apply(f.values));
}

double riesz_at_center(const std::function<double(double)>& f, int n, double mu) {
  const double sigma = sphere_area(n);
  auto g = [&](double r) { return std::pow(r, n - 1 - mu) * f(r); };

  // Head on [0,1]: r = t^{1/(1-nu)} absorbs an r^{-nu} singularity.
  const double nu = std::max(0.0, mu + 1.0 - n);
  const double e = 1.0 / (1.0 - nu);
  auto h = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double r = std::pow(t, e);
    return g(r) * e * r / t;
  };
  auto head = quad::integrate(h, 0.0, 1.0, 1e-13);

  // Tail: estimate the decay of f from two far samples.
  const double R = 64.0;
  const double f1 = std::abs(f(R)), f2 = std::abs(f(2.0 * R));
  double tail = 0.0;
  if (f1 == 0.0 && f2 == 0.0) {
    tail = quad::integrate(g, 1.0, R, 1e-13).value;
  } else {
    const double q = (f1 > 0.0 && f2 > 0.0) ? std::log2(f1 / f2) : 0.0;
    const double decay = q - n + mu;
    if (!(decay > 0.05))
      fail(ErrorCode::DivergentTail, "radial profile decays too slowly for the Riesz integral");
    tail = quad::integrate_tail(g, 1.0, decay, 1e-13).value;
  }
  return sigma * (head.value + tail);
}

void save_weights(const RieszWeights& w, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::Io, "cannot write weights cache " + path);
  const DomainSpec& d = w.domain_;
  os.write(kMagic, 4);
  os.write(reinterpret_cast<const char*>(&kFormatVersion), 1);
  const std::uint8_t kind = d.dim();
  os.write(reinterpret_cast<const char*>(&kind), 1);
  const double header[6] = {d.ax, d.bx, d.ay, d.by, w.mu_, w.scale_};
  os.write(reinterpret_cast<const char*>(header), sizeof header);
  const std::int32_t N = d.N;
  os.write(reinterpret_cast<const char*>(&N), sizeof N);
  auto put = [&](const Eigen::VectorXd& v) {
    const std::int64_t len = v.size();
    os.write(reinterpret_cast<const char*>(&len), sizeof len);
    os.write(reinterpret_cast<const char*>(v.data()), std::streamsize(len * sizeof(double)));
  };
  put(w.hat_);
  put(w.left_);
  put(w.right_);
  put(w.cell_);
  put(w.table_);
}

std::optional<RieszWeights> load_weights(const std::string& path, const DomainSpec& d,
                                         double mu) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[4];
  std::uint8_t version = 0, kind = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&version), 1);
  is.read(reinterpret_cast<char*>(&kind), 1);
  if (!is || std::string(magic, 4) != std::string(kMagic, 4) || version != kFormatVersion)
    return std::nullopt;
  double header[6];
  std::int32_t N = 0;
  is.read(reinterpret_cast<char*>(header), sizeof header);
  is.read(reinterpret_cast<char*>(&N), sizeof N);
  if (!is || kind != d.dim() || N != d.N || header[0] != d.ax || header[1] != d.bx ||
      header[2] != d.ay || header[3] != d.by || header[4] != mu)
    return std::nullopt;
  RieszWeights w;
  w.domain_ = d;
  w.mu_ = mu;
  w.scale_ = header[5];
  auto get = [&](Eigen::VectorXd& v) {
    std::int64_t len = 0;
    is.read(reinterpret_cast<char*>(&len), sizeof len);
    if (!is || len < 0 || len > (std::int64_t(1) << 32)) return false;
    v.resize(len);
    is.read(reinterpret_cast<char*>(v.data()), std::streamsize(len * sizeof(double)));
    return bool(is);
  };
  if (!get(w.hat_) || !get(w.left_) || !get(w.right_) || !get(w.cell_) || !get(w.table_))
    return std::nullopt;
  w.prepare_fft();
  return w;
}

namespace {

std::string cache_key(const DomainSpec& d, double mu) {
  std::ostringstream os;
  os.precision(17);
  os << d.describe() << "|mu=" << mu << "|v" << int(kFormatVersion);
  const std::size_t h = std::hash<std::string>{}(os.str());
  std::ostringstream name;
  name << "riesz_" << (d.dim() == 1 ? "interval" : "rectangle") << "_N" << d.N << "_" << std::hex
       << h << ".bin";
  return name.str();
}

}  // namespace

RieszWeights cached_weights(const DomainSpec& d, double mu, const std::string& cache_dir) {
  if (cache_dir.empty()) return build_weights(d, mu);
  namespace fs = std::filesystem;
  const fs::path path = fs::path(cache_dir) / cache_key(d, mu);
  if (auto w = load_weights(path.string(), d, mu)) return *w;
  RieszWeights w = build_weights(d, mu);
  std::error_code ec;
  fs::create_directories(cache_dir, ec);
  if (!ec) save_weights(w, path.string());
  return w;
}

std::string cache_directory(const std::string& fallback) {
  if (const char* env = std::getenv("FHL_CACHE_DIR"); env && *env) return env;
  return fallback;
}

}  // namespace fhl
