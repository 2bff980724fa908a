#pragma once
// Finite absorbing Markov chains and the sparse linear-algebra engine behind
// every exact solver in the library.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "harmlat/siteset.hpp"

namespace harmlat {

// Transient states are indexed 0..n_transient-1, absorbing targets
// 0..n_absorbing-1. Each transient row of (transitions + absorption) sums
// to 1.
struct AbsorbingChain {
  std::size_t n_transient = 0;
  std::vector<std::string> absorbing_labels;
  // per transient state: (transient neighbor, probability)
  std::vector<std::vector<std::pair<std::size_t, double>>> trans;
  // per transient state: (absorbing target, probability)
  std::vector<std::vector<std::pair<std::size_t, double>>> absorb;
  // set when the transient-to-transient block is symmetric (lattice walks)
  bool symmetric = false;
  // opt into conjugate gradients below the automatic size threshold; only
  // sound when the requested solution components are not many orders of
  // magnitude below the norm (CG accuracy is normwise, not componentwise)
  bool prefer_iterative = false;

  std::size_t n_absorbing() const { return absorbing_labels.size(); }
  std::size_t add_absorbing(const std::string& label) {
    absorbing_labels.push_back(label);
    return absorbing_labels.size() - 1;
  }
  void validate(double tol = 1e-12) const;
};

struct ChainSolution {
  std::vector<double> values;
  double residual = 0.0;
};

// Factorized (I - Q); reusable across many right-hand sides.
class ChainSolver {
 public:
  explicit ChainSolver(const AbsorbingChain& chain);
  ~ChainSolver();
  ChainSolver(ChainSolver&&) noexcept;
  ChainSolver& operator=(ChainSolver&&) noexcept;

  // Solve (I - Q) x = b with iterative refinement.
  ChainSolution solve(const std::vector<double>& b) const;
  // Solve (I - Q)^T x = b.
  ChainSolution solve_transposed(const std::vector<double>& b) const;

  // Absorption distribution over targets from a start distribution over
  // transient states (mass on absorbing targets can be added by the caller).
  ChainSolution absorption_from(const std::vector<double>& start_weights) const;
  // P_x(absorbed at target) for every transient x.
  ChainSolution absorption_to(std::size_t target) const;
  // Expected visits to state y before absorption, for every start x
  // (column y of the fundamental matrix).
  ChainSolution visits_to(std::size_t y) const;

  const AbsorbingChain& chain() const { return *chain_; }

 private:
  const AbsorbingChain* chain_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot helper: absorption distribution from a single transient start.
ChainSolution chain_hitting(const AbsorbingChain& chain, std::size_t start);

// Lattice chain: transient states are the points of `domain` minus `a`;
// absorbing targets are the points of `a` (labelled by index order) plus a
// final "exit" target for stepping outside the domain.
struct LatticeChain {
  AbsorbingChain chain;
  SiteSet domain_states;        // transient points, index-aligned with states
  SiteSet targets;              // the points of a
  std::size_t exit_target = 0;  // absorbing index of "exit"
  std::size_t state_of(const Point& p) const { return domain_states.index_of(p); }
};

// Ball domain: { |x|_2 <= r } minus a. Throws unless a fits strictly inside.
LatticeChain lattice_chain_ball(const SiteSet& a, double r);
// Box domain: bbox of a expanded by margin, minus a.
LatticeChain lattice_chain_box(const SiteSet& a, std::int64_t margin);

}  // namespace harmlat
