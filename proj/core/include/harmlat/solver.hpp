#pragma once
// Exact solvers: wired and from-infinity harmonic measures, killed Green's
// functions, escape/capacity, removal prices, tunnel closed forms, and the
// cross-checking diagnostics.

#include <optional>

#include "harmlat/chain.hpp"
#include "harmlat/lattice.hpp"
#include "harmlat/potential.hpp"

namespace harmlat {

struct MeasureVector {
  SiteSet support;
  std::vector<double> weights;        // aligned with support order
  std::string method;                 // wired_r | extrapolated | dense_kernel |
                                      // es_over_cap | monte_carlo
  double error_estimate = 0.0;
  bool converged = true;

  double at(const Point& p) const { return weights.at(support.index_of(p)); }
  double sum() const;
};

enum class MeasureMethod { auto_select, wired_extrapolated, dense_kernel, es_over_cap };

// Exact wired measure at finite radius r: collapse everything outside the
// Euclidean ball B(r) to a single boundary state, start there, condition on
// hitting A before returning.
MeasureVector wired_harmonic_measure(const SiteSet& a, double r);

// Harmonic measure from infinity. d=2 default: wired measures at doubling
// radii, Richardson-extrapolated in 1/r^2 (radius budget: start at
// 4*(bbox radius+1), at most max_doublings doublings; converged=false if
// tol is not reached).
// d=2 dense route: equilibrium measure of the potential-kernel system.
// d=3: equilibrium measure over the free Green matrix, normalized (Es/cap).
MeasureVector harmonic_measure_infinity(const SiteSet& a, double tol = 1e-8,
                                        MeasureMethod method = MeasureMethod::auto_select,
                                        int max_doublings = 5);

// G_A(x, y): expected visits to y before hitting A, for x, y outside A.
// Truncated-chain evaluation with radius doubling; d=2 extrapolates in
// 1/ln r, d=3 in 1/r.
struct GreenValue {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};
GreenValue green_killed(const SiteSet& a, const Point& x, const Point& y,
                        double tol = 1e-9, int max_doublings = 5);

// d=3 escape probabilities and capacity via the dense equilibrium system.
struct EscapeCapacity {
  SiteSet support;
  std::vector<double> es;
  double cap = 0.0;
};
EscapeCapacity escape_capacity(const SiteSet& a);
// Truncated-chain bracket oracle: [low, high] contains Es_A(x).
struct EscapeBracket {
  double low = 0.0, high = 1.0;
};
EscapeBracket escape_bracket(const SiteSet& a, const Point& x, double r);

// rho_{A,y}(z) = H_{A\{z}}(y) / H_A(y).
double removal_price(const SiteSet& a, const Point& y, const Point& z,
                     double tol = 1e-9,
                     MeasureMethod method = MeasureMethod::auto_select);
struct MinRemovalPrice {
  Point z_star;
  double rho_min = 0.0;
};
MinRemovalPrice min_removal_price(const SiteSet& a, const Point& y,
                                  double tol = 1e-9,
                                  MeasureMethod method = MeasureMethod::auto_select);

// Probability that a walk started at the head of a length-L corridor reaches
// the far end before leaving the corridor (closed form).
double gamma_path(int L, int d);
// The same by an exact tridiagonal solve of the corridor recurrence.
double gamma_path_tridiagonal(int L, int d);

// q_i = (1/b)(q_{i-1} + q_{i+1}) for 1 < i < n with q_1 = c, q_n = 0.
// Returns q indexed 1..n (index 0 unused) and the characteristic roots.
struct TunnelSolution {
  std::vector<double> q;
  double root_small = 0.0, root_large = 0.0;
};
TunnelSolution tunnel_recurrence(double b, int n, double c_at_1);

// Both sides of the last-exit identity
//   P_z(tau_{A1} = tau_y < infinity)
//     = sum_{v in A2\A1} G_{A1}(z, v) P_v(tau^+_{A2} = tau_y < infinity)
// evaluated exactly on a shared truncated chain of the given radius.
struct LastExitCheck {
  double lhs = 0.0, rhs = 0.0, diff = 0.0;
};
LastExitCheck last_exit_check(const SiteSet& a1, const SiteSet& a2, const Point& y,
                              const Point& z, double radius);

// ratio = H_{A\D}(0) / H_A(0) against the Green-ratio upper bound
// max_{v1, v2} G_{A\D}(v1, v2) / G_A(v1, v2) with v1 from the
// infinity-exposed inner boundary of A u F1 and v2 from the origin-exposed
// inner boundary of A u F2 (both minus A\D).
struct RatioDiagnostic {
  double ratio = 1.0;
  double bound = 1.0;  // +infinity when a denominator vanishes
  bool holds = true;
};
RatioDiagnostic ratio_upper_bound_diagnostic(const SiteSet& a, const SiteSet& d,
                                             const SiteSet& f1, const SiteSet& f2,
                                             double tol = 1e-6);

}  // namespace harmlat
