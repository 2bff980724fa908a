#include "harmlat/solver.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numeric>

namespace harmlat {

double MeasureVector::sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

MeasureVector wired_harmonic_measure(const SiteSet& a, double r) {
  if (a.empty()) throw std::invalid_argument("empty set");
  LatticeChain lc = lattice_chain_ball(a, r);
  ChainSolver solver(lc.chain);
  const double r2 = r * r;
  auto outside = [r2](const Point& p) {
    double s = 0;
    for (int i = 0; i < p.d; ++i) s += double(p.c[i]) * double(p.c[i]);
    return s > r2;
  };
  // start at the collapsed boundary state: one unit per edge into the ball
  std::vector<double> start(lc.chain.n_transient, 0.0);
  for (std::size_t i = 0; i < lc.domain_states.size(); ++i)
    for (const auto& q : neighbors(lc.domain_states[i]))
      if (outside(q)) start[i] += 1.0;
  std::vector<double> direct(a.size(), 0.0);  // edges straight into A
  for (std::size_t t = 0; t < a.size(); ++t)
    for (const auto& q : neighbors(a[t]))
      if (outside(q)) direct[t] += 1.0;

  auto sol = solver.absorption_from(start);
  MeasureVector mv;
  mv.support = a;
  mv.method = "wired_r";
  mv.error_estimate = sol.residual;
  mv.weights.assign(a.size(), 0.0);
  double mass = 0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    mv.weights[t] = sol.values[t] + direct[t];
    mass += mv.weights[t];
  }
  if (mass <= 0) throw std::runtime_error("wired measure: no mass reached the set");
  for (auto& w : mv.weights) w /= mass;
  return mv;
}

namespace {

MeasureVector dense_equilibrium(const SiteSet& a, bool d2) {
  const std::size_t n = a.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Point diff = a[i] - a[j];
      m(i, j) = d2 ? PotentialKernel2D::shared().a(diff)
                   : FreeGreen3D::shared().g(diff);
    }
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd mu = lu.solve(rhs);
  // one refinement pass
  mu += lu.solve(rhs - m * mu);
  const double residual = (rhs - m * mu).cwiseAbs().maxCoeff();

  MeasureVector mv;
  mv.support = a;
  mv.method = d2 ? "dense_kernel" : "es_over_cap";
  mv.error_estimate = residual;
  const double total = mu.sum();
  if (!(total > 0)) throw std::runtime_error("equilibrium system degenerate");
  mv.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    mv.weights[i] = std::max(0.0, mu(i) / total);
  return mv;
}

// Polynomial extrapolation of vector estimates H(u_k) to u = 0.
std::vector<double> extrapolate_to_zero(const std::vector<double>& us,
                                        const std::vector<std::vector<double>>& hs) {
  const std::size_t k = us.size();
  const std::size_t n = hs[0].size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) w *= (0.0 - us[j]) / (us[i] - us[j]);
    for (std::size_t c = 0; c < n; ++c) out[c] += w * hs[i][c];
  }
  return out;
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

MeasureVector wired_extrapolated(const SiteSet& a, double tol, int max_doublings) {
  const double r0 = 4.0 * double(a.bbox().linf_radius() + 1);
  std::vector<double> us;
  std::vector<std::vector<double>> hs;
  std::vector<double> best, prev3;
  double err = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int k = 0; k <= max_doublings; ++k) {
    const double r = r0 * std::pow(2.0, k);
    auto w = wired_harmonic_measure(a, r);
    // the finite-radius bias decays like 1/r^2 (the 1/ln r dipole term
    // cancels when averaging over the wired boundary), so extrapolate in
    // u = 1/r^2
    us.push_back(1.0 / (r * r));
    hs.push_back(w.weights);
    if (hs.size() < 2) {
      best = w.weights;
      continue;
    }
    const std::size_t m = hs.size();
    std::vector<double> u2(us.end() - 2, us.end());
    std::vector<std::vector<double>> h2(hs.end() - 2, hs.end());
    auto e2 = extrapolate_to_zero(u2, h2);
    std::vector<double> e3;
    if (m >= 3) {
      std::vector<double> u3(us.end() - 3, us.end());
      std::vector<std::vector<double>> h3(hs.end() - 3, hs.end());
      e3 = extrapolate_to_zero(u3, h3);
    }
    const auto& cur = e3.empty() ? e2 : e3;
    if (!prev3.empty()) {
      // the correction beyond 1/r^2 carries slowly varying (logarithmic)
      // factors, so inflate the successive-difference estimate
      double d_succ = max_abs_diff(cur, prev3);
      double d_order = e3.empty() ? d_succ : max_abs_diff(e3, e2);
      err = 3.0 * d_succ + 0.5 * d_order;
      best = cur;
      if (err < tol) {
        converged = true;
        break;
      }
    } else {
      best = cur;
    }
    prev3 = cur;
  }
  MeasureVector mv;
  mv.support = a;
  mv.method = "extrapolated";
  mv.weights = best;
  for (auto& w : mv.weights) w = std::max(0.0, w);
  mv.error_estimate = err;
  mv.converged = converged;
  return mv;
}

}  // namespace

MeasureVector harmonic_measure_infinity(const SiteSet& a, double tol,
                                        MeasureMethod method, int max_doublings) {
  if (a.empty()) throw std::invalid_argument("empty set");
  if (a.size() == 1) {
    MeasureVector mv;
    mv.support = a;
    mv.weights = {1.0};
    mv.method = a.dim() == 2 ? "dense_kernel" : "es_over_cap";
    return mv;
  }
  if (a.dim() == 3) {
    if (method == MeasureMethod::wired_extrapolated)
      throw std::invalid_argument("wired extrapolation route is d=2 only");
    return dense_equilibrium(a, false);
  }
  if (a.dim() != 2)
    throw std::invalid_argument("harmonic measure from infinity needs d in {2,3}");
  switch (method) {
    case MeasureMethod::es_over_cap:
      throw std::invalid_argument("Es/cap route is d>=3 only");
    case MeasureMethod::dense_kernel:
      return dense_equilibrium(a, true);
    case MeasureMethod::auto_select:
    case MeasureMethod::wired_extrapolated:
      return wired_extrapolated(a, tol, max_doublings);
  }
  throw std::logic_error("unreachable");
}

GreenValue green_killed(const SiteSet& a, const Point& x, const Point& y,
                        double tol, int max_doublings) {
  if (a.empty()) throw std::invalid_argument("empty killing set");
  if (a.contains(x) || a.contains(y)) return {0.0, 0.0, true};
  const int d = a.dim();
  std::int64_t reach = std::max({a.bbox().linf_radius(), x.norm_linf(), y.norm_linf()});
  const double r0 = std::max(4.0 * double(reach + 1), 16.0);
  std::vector<double> us;
  std::vector<std::vector<double>> gs;
  GreenValue out;
  out.converged = false;
  std::vector<double> prev;
  for (int k = 0; k <= max_doublings; ++k) {
    const double r = r0 * std::pow(2.0, k);
    LatticeChain lc = lattice_chain_ball(a, r);
    ChainSolver solver(lc.chain);
    auto col = solver.visits_to(lc.state_of(y));
    gs.push_back({col.values[lc.state_of(x)]});
    us.push_back(d == 2 ? 1.0 / std::log(r) : 1.0 / r);
    const std::size_t m = gs.size();
    std::vector<double> cur;
    if (m == 1) {
      cur = gs[0];
    } else {
      const std::size_t use = std::min<std::size_t>(3, m);
      std::vector<double> uu(us.end() - use, us.end());
      std::vector<std::vector<double>> gg(gs.end() - use, gs.end());
      cur = extrapolate_to_zero(uu, gg);
    }
    if (!prev.empty()) {
      out.error_estimate = 3.0 * std::abs(cur[0] - prev[0]);
      out.value = cur[0];
      if (out.error_estimate < tol * std::max(1.0, std::abs(cur[0]))) {
        out.converged = true;
        break;
      }
    } else {
      out.value = cur[0];
    }
    prev = cur;
  }
  return out;
}

EscapeCapacity escape_capacity(const SiteSet& a) {
  if (a.dim() != 3) throw std::invalid_argument("capacity route is d=3 only");
  if (a.empty()) throw std::invalid_argument("empty set");
  const std::size_t n = a.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = FreeGreen3D::shared().g(a[i] - a[j]);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::VectorXd es = lu.solve(rhs);
  es += lu.solve(rhs - m * es);
  EscapeCapacity out;
  out.support = a;
  out.es.assign(es.data(), es.data() + n);
  out.cap = es.sum();
  return out;
}

EscapeBracket escape_bracket(const SiteSet& a, const Point& x, double r) {
  if (a.dim() != 3) throw std::invalid_argument("escape bracket is d=3 only");
  if (!a.contains(x)) throw std::invalid_argument("escape start must lie in the set");
  LatticeChain lc = lattice_chain_ball(a, r);
  ChainSolver solver(lc.chain);
  auto u = solver.absorption_to(lc.exit_target);
  const double r2 = r * r;
  double p = 0;
  for (const auto& q : neighbors(x)) {
    if (a.contains(q)) continue;
    double s = 0;
    for (int i = 0; i < 3; ++i) s += double(q.c[i]) * double(q.c[i]);
    if (s > r2)
      p += 1.0;
    else
      p += u.values[lc.state_of(q)];
  }
  p /= 6.0;
  // returning from the sphere costs at most the worst-case hitting chance
  const double g0 = FreeGreen3D::shared().g0();
  const std::int64_t gap =
      std::max<std::int64_t>(1, std::int64_t(r) - a.bbox().linf_radius());
  const double delta =
      std::min(1.0, double(a.size()) * FreeGreen3D::shared().g(gap, 0, 0) / g0);
  return {p * (1.0 - delta), p};
}

namespace {

MeasureMethod resolve_method(const SiteSet& a, MeasureMethod method) {
  if (method != MeasureMethod::auto_select) return method;
  return a.dim() == 2 ? MeasureMethod::dense_kernel : MeasureMethod::es_over_cap;
}

}  // namespace

double removal_price(const SiteSet& a, const Point& y, const Point& z, double tol,
                     MeasureMethod method) {
  if (!a.contains(y) || !a.contains(z) || y == z)
    throw std::invalid_argument("removal price needs distinct y, z in the set");
  method = resolve_method(a, method);
  auto h_full = harmonic_measure_infinity(a, tol, method);
  const double hy = h_full.at(y);
  if (!(hy > 0)) throw std::invalid_argument("removal price undefined: H_A(y) = 0");
  auto h_red = harmonic_measure_infinity(a.without(z), tol, method);
  const double ratio = h_red.at(y) / hy;
  if (ratio < 1.0 - std::max(tol, 1e-7) * 10.0)
    throw std::logic_error("removal monotonicity violated beyond tolerance");
  return std::max(ratio, 1.0);
}

MinRemovalPrice min_removal_price(const SiteSet& a, const Point& y, double tol,
                                  MeasureMethod method) {
  if (a.size() < 2) throw std::invalid_argument("need at least two points");
  method = resolve_method(a, method);
  auto h_full = harmonic_measure_infinity(a, tol, method);
  const double hy = h_full.at(y);
  if (!(hy > 0)) throw std::invalid_argument("minimum price undefined: H_A(y) = 0");
  MinRemovalPrice best;
  bool have = false;
  for (const auto& z : a.points()) {
    if (z == y) continue;
    auto h_red = harmonic_measure_infinity(a.without(z), tol, method);
    const double rho = std::max(1.0, h_red.at(y) / hy);
    if (!have || rho < best.rho_min) {
      best = {z, rho};
      have = true;
    }
  }
  if (!have) throw std::logic_error("no removable vertex");
  return best;
}

double gamma_path(int L, int d) {
  if (L < 0) throw std::invalid_argument("negative path length");
  const double s = std::sqrt(double(d) * d - 1.0);
  return 2.0 * s /
         (std::pow(d + s, L + 1) - std::pow(d - s, L + 1));
}

double gamma_path_tridiagonal(int L, int d) {
  if (L < 0) throw std::invalid_argument("negative path length");
  if (L == 0) return 1.0;
  if (L == 1) return 1.0 / (2.0 * d);
  // unknowns q_0..q_{L-1}; q_L = 1
  // q_0 = q_1/(2d); 2d q_i = q_{i-1} + q_{i+1} for 1 <= i <= L-1
  const double b = 2.0 * d;
  std::vector<double> diag(L), upper(L), rhs(L, 0.0);
  diag[0] = 1.0;
  upper[0] = -1.0 / b;
  for (int i = 1; i < L; ++i) {
    diag[i] = b;
    upper[i] = -1.0;
  }
  rhs[L - 1] = 1.0;
  // lower coefficients are -1 for rows 1..L-1
  for (int i = 1; i < L; ++i) {
    const double w = -1.0 / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> q(L);
  q[L - 1] = rhs[L - 1] / diag[L - 1];
  for (int i = L - 2; i >= 0; --i) q[i] = (rhs[i] - upper[i] * q[i + 1]) / diag[i];
  return q[0];
}

TunnelSolution tunnel_recurrence(double b, int n, double c_at_1) {
  if (n < 2) throw std::invalid_argument("tunnel needs n >= 2");
  if (b <= 2.0) throw std::invalid_argument("tunnel needs b > 2");
  TunnelSolution out;
  const double disc = std::sqrt(b * b - 4.0);
  out.root_small = (b - disc) / 2.0;
  out.root_large = (b + disc) / 2.0;
  out.q.assign(n + 1, 0.0);
  out.q[1] = c_at_1;
  out.q[n] = 0.0;
  const int m = n - 2;  // unknowns q_2..q_{n-1}
  if (m <= 0) return out;
  std::vector<double> diag(m, b), rhs(m, 0.0);
  rhs[0] = c_at_1;
  for (int i = 1; i < m; ++i) {
    const double w = -1.0 / diag[i - 1];
    diag[i] -= w * (-1.0);
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> q(m);
  q[m - 1] = rhs[m - 1] / diag[m - 1];
  for (int i = m - 2; i >= 0; --i) q[i] = (rhs[i] + q[i + 1]) / diag[i];
  for (int i = 0; i < m; ++i) out.q[i + 2] = q[i];
  return out;
}

LastExitCheck last_exit_check(const SiteSet& a1, const SiteSet& a2, const Point& y,
                              const Point& z, double radius) {
  if (!a1.contains(y)) throw std::invalid_argument("y must lie in the inner set");
  if (!a2.contains(z) || a1.contains(z))
    throw std::invalid_argument("z must lie in A2 \\ A1");
  for (const auto& p : a1.points())
    if (!a2.contains(p)) throw std::invalid_argument("sets must be nested");

  LatticeChain lc1 = lattice_chain_ball(a1, radius);
  ChainSolver s1(lc1.chain);
  LatticeChain lc2 = lattice_chain_ball(a2, radius);
  ChainSolver s2(lc2.chain);

  const auto hit_y1 = s1.absorption_to(a1.index_of(y));
  LastExitCheck out;
  out.lhs = hit_y1.values[lc1.state_of(z)];

  const auto hit_y2 = s2.absorption_to(a2.index_of(y));
  const double inv = 1.0 / (2.0 * a1.dim());
  const double r2 = radius * radius;
  auto inside = [r2](const Point& p) {
    double s = 0;
    for (int i = 0; i < p.d; ++i) s += double(p.c[i]) * double(p.c[i]);
    return s <= r2;
  };
  double rhs = 0;
  for (const auto& v : a2.points()) {
    if (a1.contains(v)) continue;
    const auto g_col = s1.visits_to(lc1.state_of(v));
    const double g_zv = g_col.values[lc1.state_of(z)];
    double pv = 0;
    for (const auto& w : neighbors(v)) {
      if (w == y)
        pv += inv;
      else if (a2.contains(w) || !inside(w))
        continue;
      else
        pv += inv * hit_y2.values[lc2.state_of(w)];
    }
    rhs += g_zv * pv;
  }
  out.rhs = rhs;
  out.diff = std::abs(out.lhs - out.rhs);
  return out;
}

RatioDiagnostic ratio_upper_bound_diagnostic(const SiteSet& a, const SiteSet& d,
                                             const SiteSet& f1, const SiteSet& f2,
                                             double tol) {
  const Point zero = Point::origin(a.dim());
  if (!a.contains(zero)) throw std::invalid_argument("origin must lie in the set");
  if (d.contains(zero)) throw std::invalid_argument("origin may not be removed");
  for (const auto& p : d.points())
    if (!a.contains(p)) throw std::invalid_argument("removed set must lie inside");
  for (const auto& p : f1.points())
    if (!f2.contains(p)) throw std::invalid_argument("F1 must lie inside F2");
  auto check_f = [&](const SiteSet& f) {
    SiteSet inter = f.intersect(a);
    if (!(inter == d)) throw std::invalid_argument("F and the set must meet exactly at D");
  };
  check_f(f1);
  check_f(f2);

  const SiteSet a_tilde = a.subtract(d);
  auto h_full = harmonic_measure_infinity(a, 1e-9, resolve_method(a, MeasureMethod::auto_select));
  const double h0 = h_full.at(zero);
  if (!(h0 > 0)) throw std::invalid_argument("origin has zero harmonic measure");
  auto h_red = harmonic_measure_infinity(a_tilde, 1e-9,
                                         resolve_method(a, MeasureMethod::auto_select));
  RatioDiagnostic out;
  out.ratio = h_red.at(zero) / h0;

  const SiteSet u1 = a.unite(f1);
  const SiteSet u2 = a.unite(f2);
  const SiteSet fhat1 =
      boundary(u1, BoundaryKind::inner_ext, Adjacency::plain).subtract(a_tilde);
  const SiteSet fcheck2 =
      boundary(u2, BoundaryKind::inner_zero, Adjacency::plain).subtract(a_tilde);

  // d=2 needs a generous ball (logarithmic Green convergence); d>=3 Green
  // values converge like 1/r, and 3-D balls get expensive fast
  if (fhat1.empty() || fcheck2.empty()) {
    // no exposed route through F: the removal is invisible from infinity
    // (or from the origin), so the measure at the origin cannot change
    out.bound = 1.0;
    out.holds = out.ratio <= 1.0 + tol;
    return out;
  }

  const double radius =
      a.dim() == 2 ? std::max(8.0 * double(u2.bbox().linf_radius() + 2), 48.0)
                   : std::max(3.0 * double(u2.bbox().linf_radius() + 2), 24.0);
  LatticeChain lca = lattice_chain_ball(a, radius);
  LatticeChain lct = lattice_chain_ball(a_tilde, radius);
  if (a.dim() >= 3) {
    // the Green values compared here are O(1): iterative solves are safe
    // and avoid the severe LU fill-in of 3-D balls
    lca.chain.prefer_iterative = true;
    lct.chain.prefer_iterative = true;
  }
  ChainSolver sa(lca.chain);
  ChainSolver st(lct.chain);

  double bound = 0.0;
  for (const auto& v2 : fcheck2.points()) {
    const bool v2_in_a = a.contains(v2);
    const bool v2_in_t = a_tilde.contains(v2);
    ChainSolution col_a, col_t;
    if (!v2_in_a) col_a = sa.visits_to(lca.state_of(v2));
    if (!v2_in_t) col_t = st.visits_to(lct.state_of(v2));
    for (const auto& v1 : fhat1.points()) {
      const double g_a = (v2_in_a || a.contains(v1))
                             ? 0.0
                             : col_a.values[lca.state_of(v1)];
      const double g_t = (v2_in_t || a_tilde.contains(v1))
                             ? 0.0
                             : col_t.values[lct.state_of(v1)];
      if (g_a <= 1e-300) {
        if (g_t > 1e-300) bound = std::numeric_limits<double>::infinity();
        continue;
      }
      bound = std::max(bound, g_t / g_a);
    }
  }
  out.bound = bound;
  out.holds = out.ratio <= bound * (1.0 + tol) + tol;
  return out;
}

}  // namespace harmlat
