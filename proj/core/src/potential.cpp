#include "harmlat/potential.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace harmlat {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGl = 16;
const double kGlX[kGl] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
const double kGlW[kGl] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

template <typename F>
double gauss_panel(F&& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double s = 0;
  for (int i = 0; i < kGl; ++i) s += kGlW[i] * f(mid + half * kGlX[i]);
  return s * half;
}

}  // namespace

double PotentialKernel2D::a(std::int64_t x1, std::int64_t x2) const {
  return a(Point(x1, x2));
}

double PotentialKernel2D::a(const Point& x) const {
  if (x.d != 2) throw std::invalid_argument("potential kernel is d=2 only");
  const std::int64_t m = std::max(std::llabs(x.c[0]), std::llabs(x.c[1]));
  const std::int64_t k = std::min(std::llabs(x.c[0]), std::llabs(x.c[1]));
  if (m == 0) return 0.0;
  Point key(m, k);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  // a(x) = (2/pi) Int_0^pi [1 - lambda(t)^m cos(k t)] / sqrt(b^2-1) dt,
  // b = 2 - cos t, lambda = b - sqrt(b^2 - 1). The integrand varies on the
  // scale 1/m near t = 0 and oscillates with frequency k, so integrate over
  // dyadic panels toward 0, each split to a few oscillation periods.
  auto f = [m, k](double t) {
    // b - 1 = 1 - cos t = 2 sin^2(t/2), kept in factored form so that
    // sqrt(b^2-1) and lambda stay accurate down to t ~ 1e-9
    const double sh = std::sin(0.5 * t);
    const double bm1 = 2.0 * sh * sh;
    if (bm1 <= 0) return double(m);  // t -> 0 limit
    const double b = 1.0 + bm1;
    const double s = std::sqrt(bm1 * (b + 1.0));
    const double pw = std::exp(-double(m) * std::log(b + s));  // lambda^m
    return (1.0 - pw * std::cos(double(k) * t)) / s;
  };

  const double pi = std::acos(-1.0);
  double total = 0.0;
  double hi = pi;
  // dyadic descent until panels are below both feature scales
  const double t_min = std::min(1.0 / (16.0 * double(m)), 0.25);
  while (hi > t_min) {
    double lo = hi * 0.5;
    if (lo < t_min) lo = t_min;
    const double width = hi - lo;
    int parts = 1 + int(double(k) * width / 2.0);
    const double h = width / parts;
    for (int p = 0; p < parts; ++p)
      total += gauss_panel(f, lo + p * h, lo + (p + 1) * h);
    hi = lo;
  }
  // final smooth panel [0, t_min]
  int parts = 1 + int(double(k) * hi / 2.0);
  const double h = hi / parts;
  for (int p = 0; p < parts; ++p)
    total += gauss_panel(f, p * h, (p + 1) * h);

  const double val = 2.0 / pi * total;
  cache_[key] = val;
  return val;
}

const PotentialKernel2D& PotentialKernel2D::shared() {
  static PotentialKernel2D instance;
  return instance;
}

// ---------------------------------------------------------------------------

namespace {

// exp(-z) I_n(z) for all n = 0..nmax at once, by trapezoid on [0, pi]
// (spectrally accurate for this periodic analytic integrand).
void scaled_bessel_all(double z, int nmax, std::vector<double>& out) {
  const double pi = std::acos(-1.0);
  const int nt = std::max(64, int(10.0 * std::sqrt(z)) + nmax + 16);
  out.assign(nmax + 1, 0.0);
  for (int j = 0; j <= nt; ++j) {
    const double theta = pi * j / nt;
    const double w = (j == 0 || j == nt) ? 0.5 : 1.0;
    const double e = w * std::exp(-z * (1.0 - std::cos(theta)));
    // cos(n*theta) by recurrence
    const double c1 = std::cos(theta);
    double cm1 = 1.0, c0 = c1;
    out[0] += e;
    if (nmax >= 1) out[1] += e * c1;
    for (int n = 2; n <= nmax; ++n) {
      const double cn = 2.0 * c1 * c0 - cm1;
      out[n] += e * cn;
      cm1 = c0;
      c0 = cn;
    }
  }
  for (auto& v : out) v *= pi / nt / pi;  // trapezoid step / (1/pi) factor
}

}  // namespace

void FreeGreen3D::ensure_table(std::int64_t max_abs) const {
  if (max_abs <= table_max_) return;
  const std::int64_t nmax = std::max<std::int64_t>(max_abs, 8);
  // integrate 0..T with the asymptotic tail appended; T large enough that
  // the 3-term Bessel asymptotic is accurate at the matching point
  const double T = std::max(3.0e5, 3000.0 * double(nmax) * double(nmax));
  nodes_.clear();
  weights_.clear();
  double lo = 0.0, hi = 1.0;
  while (lo < T) {
    if (hi > T) hi = T;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int i = 0; i < kGl; ++i) {
      nodes_.push_back(mid + half * kGlX[i]);
      weights_.push_back(half * kGlW[i]);
    }
    lo = hi;
    hi = lo * 1.30;
  }
  bessel_.assign(nmax + 1, std::vector<double>(nodes_.size()));
  std::vector<double> tmp;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    scaled_bessel_all(nodes_[j] / 3.0, int(nmax), tmp);
    for (std::int64_t n = 0; n <= nmax; ++n) bessel_[n][j] = tmp[n];
  }
  table_max_ = nmax;
  tail_t_ = T;
  cache_.clear();
}

double FreeGreen3D::g(std::int64_t x1, std::int64_t x2, std::int64_t x3) const {
  return g(Point(x1, x2, x3));
}

double FreeGreen3D::g(const Point& x) const {
  if (x.d != 3) throw std::invalid_argument("free Green table is d=3 only");
  std::array<std::int64_t, 3> n{std::llabs(x.c[0]), std::llabs(x.c[1]),
                                std::llabs(x.c[2])};
  std::sort(n.begin(), n.end());
  Point key(n[0], n[1], n[2]);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  ensure_table(n[2]);

  double val = 0.0;
  const auto& b0 = bessel_[n[0]];
  const auto& b1 = bessel_[n[1]];
  const auto& b2 = bessel_[n[2]];
  for (std::size_t j = 0; j < nodes_.size(); ++j)
    val += weights_[j] * b0[j] * b1[j] * b2[j];

  // analytic tail from the product of Bessel asymptotics:
  // prod ~ (2 pi z)^{-3/2} (1 + alpha/z + beta/z^2), z = t/3
  double alpha = 0, beta = 0, prod_a = 0;
  double as[3], bs[3];
  for (int i = 0; i < 3; ++i) {
    const double fn = double(4 * n[i] * n[i]);
    as[i] = -(fn - 1.0) / 8.0;
    bs[i] = (fn - 1.0) * (fn - 9.0) / 128.0;
    alpha += as[i];
    beta += bs[i];
  }
  prod_a = as[0] * as[1] + as[0] * as[2] + as[1] * as[2];
  beta += prod_a;
  const double pi = std::acos(-1.0);
  const double c = std::pow(3.0 / (2.0 * pi), 1.5);
  const double T = tail_t_;
  // substitute z = t/3: alpha/z = 3 alpha / t etc., integrate t^{-3/2} terms
  val += c * (2.0 / std::sqrt(T) + 2.0 * alpha * std::pow(T, -1.5) +
              (18.0 / 5.0) * beta * std::pow(T, -2.5));

  cache_[key] = val;
  return val;
}

const FreeGreen3D& FreeGreen3D::shared() {
  static FreeGreen3D instance;
  return instance;
}

}  // namespace harmlat
