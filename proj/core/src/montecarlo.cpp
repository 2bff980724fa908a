#include "harmlat/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace harmlat {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64(s);
  s = stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
  state_ = a ^ splitmix64(s);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

std::uint32_t Rng::next_below(std::uint32_t n) {
  // Lemire's bounded draw; the modulo bias is far below any tolerance here
  return std::uint32_t((__uint128_t(next_u64()) * n) >> 64);
}

namespace {

double norm2(const Point& p) { return p.norm_l2(); }

// One uniform lattice step.
inline void step(Point& p, Rng& rng) {
  const std::uint32_t k = rng.next_below(2 * p.d);
  const int axis = int(k >> 1);
  p.c[axis] += (k & 1) ? -1 : 1;
}

// Isotropic long jump of length len (continuous direction, rounded).
// Valid whenever the ball of radius len around p lies in a region where the
// functions being averaged are harmonic: the spherical mean-value property
// makes the jump unbiased up to lattice rounding.
inline void jump(Point& p, double len, Rng& rng) {
  if (p.d == 2) {
    const double th = 2.0 * M_PI * rng.next_double();
    p.c[0] += std::llround(len * std::cos(th));
    p.c[1] += std::llround(len * std::sin(th));
  } else {
    // uniform direction on S^{d-1} via normalized Gaussians (Box-Muller)
    double g[4], n2 = 0;
    for (int i = 0; i < p.d; i += 2) {
      const double u = rng.next_double(), v = rng.next_double();
      const double r = std::sqrt(-2.0 * std::log(1.0 - u));
      g[i] = r * std::cos(2.0 * M_PI * v);
      if (i + 1 < p.d) g[i + 1] = r * std::sin(2.0 * M_PI * v);
    }
    for (int i = 0; i < p.d; ++i) n2 += g[i] * g[i];
    const double inv = len / std::sqrt(n2 + 1e-300);
    for (int i = 0; i < p.d; ++i) p.c[i] += std::llround(g[i] * inv);
  }
}

// Points of the inner discrete sphere: |p| <= r with a neighbor outside.
std::vector<Point> inner_sphere(int d, double r) {
  std::vector<Point> out;
  const std::int64_t R = std::int64_t(std::floor(r));
  auto consider = [&](const Point& p) {
    if (norm2(p) > r) return;
    for (const auto& q : neighbors(p))
      if (norm2(q) > r) {
        out.push_back(p);
        return;
      }
  };
  std::vector<std::int64_t> c(d, -R);
  // scan the annulus shell: any sphere point has some |coordinate| >= R/2
  // ... a plain box scan is fine at these radii
  bool done = false;
  while (!done) {
    Point p(std::vector<std::int64_t>(c.begin(), c.end()));
    consider(p);
    done = true;
    for (int i = 0; i < d; ++i) {
      if (c[i] < R) {
        ++c[i];
        done = false;
        break;
      }
      c[i] = -R;
    }
  }
  if (out.empty()) throw std::invalid_argument("empty start sphere");
  return out;
}

constexpr std::size_t kStepCap = 10000000;

}  // namespace

McEstimate mc_hitting_far(const SiteSet& a, double start_radius,
                          std::size_t samples, std::uint64_t seed) {
  if (a.empty() || samples == 0) throw std::invalid_argument("bad mc parameters");
  const int d = a.dim();
  const double bbox_r = double(a.bbox().linf_radius());
  if (start_radius <= 2.0 * bbox_r)
    throw std::invalid_argument("start radius must exceed twice the bbox radius");
  for (const auto& p : a.points())
    if (norm2(p) >= start_radius) throw std::invalid_argument("set outside start sphere");

  const auto sphere = inner_sphere(d, start_radius);
  const double kill_r = d >= 3 ? 8.0 * start_radius : 0.0;
  // jumps only strictly outside this protective radius around A
  double window_r = 0;
  for (const auto& p : a.points()) window_r = std::max(window_r, norm2(p));
  window_r += 2.0;

  std::vector<std::size_t> counts(a.size(), 0);
  std::size_t restarts = 0, hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(seed, i);
    bool absorbed = false;
    while (!absorbed) {
      Point p = sphere[rng.next_below(std::uint32_t(sphere.size()))];
      for (std::size_t st = 0; st < kStepCap; ++st) {
        if (a.contains(p)) {
          ++counts[a.index_of(p)];
          ++hits;
          absorbed = true;
          break;
        }
        const double r = norm2(p);
        if (d >= 3 && r >= kill_r) {
          absorbed = true;  // killed; conditioned out
          break;
        }
        double len = (r - window_r) / 2.0;
        if (d >= 3) len = std::min(len, kill_r - r - 2.0);
        if (len >= 4.0)
          jump(p, std::floor(len), rng);
        else
          step(p, rng);
      }
      if (!absorbed) ++restarts;  // step cap: restart this sample afresh
    }
  }
  if (hits == 0) throw std::runtime_error("no conditioned samples hit the set");

  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.restarts = restarts;
  est.conditioning_fraction = double(hits) / double(samples);
  if (d >= 3) est.kill_radius = kill_r;
  MeasureVector mv;
  mv.support = a;
  mv.method = "monte_carlo";
  mv.weights.resize(a.size());
  est.stderr_weights.resize(a.size());
  double worst = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double p = double(counts[j]) / double(hits);
    mv.weights[j] = p;
    est.stderr_weights[j] = std::sqrt(p * (1.0 - p) / double(hits));
    worst = std::max(worst, est.stderr_weights[j]);
  }
  mv.error_estimate = worst;
  est.measure = std::move(mv);
  return est;
}

McEstimate mc_escape(const SiteSet& a, const Point& x, double kill_radius,
                     std::size_t samples, std::uint64_t seed) {
  if (a.dim() < 3) throw std::invalid_argument("mc_escape requires d >= 3");
  if (!a.contains(x)) throw std::invalid_argument("start point must be in the set");
  if (samples == 0) throw std::invalid_argument("bad sample count");
  double window_r = 0;
  for (const auto& p : a.points()) window_r = std::max(window_r, norm2(p));
  window_r += 2.0;
  if (kill_radius <= window_r + 4.0) throw std::invalid_argument("kill radius too small");

  std::size_t success = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(seed, i);
    Point p = x;
    step(p, rng);
    bool done = false;
    while (!done) {
      if (a.contains(p)) break;  // returned: failure
      const double r = norm2(p);
      if (r >= kill_radius) {
        ++success;
        break;
      }
      double len = std::min((r - window_r) / 2.0, kill_radius - r - 2.0);
      if (len >= 4.0)
        jump(p, std::floor(len), rng);
      else
        step(p, rng);
    }
  }
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.kill_radius = kill_radius;
  est.value = double(success) / double(samples);
  est.stderr_value = std::sqrt(est.value * (1.0 - est.value) / double(samples));
  return est;
}

McEstimate mc_path_traversal(const Path& eta, std::size_t samples,
                             std::uint64_t seed) {
  if (eta.vertices.empty()) throw std::invalid_argument("empty path");
  auto props = path_ops(eta);
  if (!props.is_self_avoiding) throw std::invalid_argument("path must be self-avoiding");
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  if (eta.vertices.size() == 1) {
    est.value = 1.0;
    return est;
  }
  std::unordered_set<Point, PointHash> range(eta.vertices.begin(), eta.vertices.end());
  const Point goal = eta.vertices.back();
  std::size_t success = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(seed, i);
    Point p = eta.vertices.front();
    while (true) {
      step(p, rng);
      if (p == goal) {
        ++success;
        break;
      }
      if (!range.count(p)) break;
    }
  }
  est.value = double(success) / double(samples);
  est.stderr_value = std::sqrt(est.value * (1.0 - est.value) / double(samples));
  return est;
}

}  // namespace harmlat
