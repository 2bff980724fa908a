#pragma once
// Stochastic estimators used as independent oracles against the exact
// solvers: hitting distributions from far away, escape probabilities, and
// fixed-path traversal probabilities.

#include <cstdint>
#include <optional>

#include "harmlat/lattice.hpp"
#include "harmlat/solver.hpp"

namespace harmlat {

// Counter-based generator: every sample draws from its own stream derived
// from (seed, sample index), so serial and parallel runs agree exactly.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  double next_double();                 // uniform in [0, 1)
  std::uint32_t next_below(std::uint32_t n);  // uniform in [0, n)

 private:
  std::uint64_t state_;
};

struct McEstimate {
  double value = 0.0;                    // scalar estimate (when applicable)
  double stderr_value = 0.0;
  std::optional<MeasureVector> measure;  // per-site estimate (when applicable)
  std::vector<double> stderr_weights;    // aligned with measure support
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> kill_radius;
  std::size_t restarts = 0;              // walks that hit the step cap
  double conditioning_fraction = 1.0;    // d>=3: fraction absorbed before kill
};

// Hitting distribution of A for walks started uniformly on the inner sphere
// of radius start_radius (> twice the bbox radius). d=2 walks run to
// absorption under a 1e7-step cap with restart accounting; d>=3 walks are
// conditioned on hitting A before the kill radius 8*start_radius.
McEstimate mc_hitting_far(const SiteSet& a, double start_radius,
                          std::size_t samples, std::uint64_t seed);

// P_x(reach kill_radius before returning to A), x in A, d >= 3. The value
// estimates the killed escape probability; combine with the exact two-radius
// bracket for the systematic part.
McEstimate mc_escape(const SiteSet& a, const Point& x, double kill_radius,
                     std::size_t samples, std::uint64_t seed);

// Probability of walking from the first to the last vertex of a
// self-avoiding path without leaving its range.
McEstimate mc_path_traversal(const Path& eta, std::size_t samples,
                             std::uint64_t seed);

}  // namespace harmlat
