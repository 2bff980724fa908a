#include "harmlat/chain.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "harmlat/lattice.hpp"

namespace harmlat {

void AbsorbingChain::validate(double tol) const {
  if (trans.size() != n_transient || absorb.size() != n_transient)
    throw std::logic_error("chain row count mismatch");
  for (std::size_t i = 0; i < n_transient; ++i) {
    double s = 0;
    for (auto& [j, p] : trans[i]) {
      if (j >= n_transient || p < 0) throw std::logic_error("bad transition entry");
      s += p;
    }
    for (auto& [t, p] : absorb[i]) {
      if (t >= n_absorbing() || p < 0) throw std::logic_error("bad absorption entry");
      s += p;
    }
    if (std::abs(s - 1.0) > tol)
      throw std::logic_error("transient row does not sum to 1");
  }
}

struct ChainSolver::Impl {
  Eigen::SparseMatrix<double> m;   // I - Q (column major)
  Eigen::SparseMatrix<double> mt;  // transpose
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu, lut;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper>
      cg;
  bool use_cg = false;
  bool lut_ready = false;
};

namespace {
// Above this size a symmetric system is solved with conjugate gradients to
// avoid LU fill-in; below it, sparse LU keeps componentwise accuracy for
// very small probabilities.
constexpr std::size_t kCgThreshold = 150000;
}  // namespace

ChainSolver::ChainSolver(const AbsorbingChain& chain) : chain_(&chain) {
  const auto n = static_cast<Eigen::Index>(chain.n_transient);
  std::vector<Eigen::Triplet<double>> trips;
  std::size_t nnz = chain.n_transient;
  for (const auto& row : chain.trans) nnz += row.size();
  trips.reserve(nnz);
  for (std::size_t i = 0; i < chain.n_transient; ++i) {
    trips.emplace_back(i, i, 1.0);
    for (auto& [j, p] : chain.trans[i]) trips.emplace_back(i, j, -p);
  }
  impl_ = std::make_unique<Impl>();
  impl_->m.resize(n, n);
  impl_->m.setFromTriplets(trips.begin(), trips.end());
  impl_->m.makeCompressed();
  impl_->use_cg = chain.symmetric &&
                  (chain.n_transient > kCgThreshold || chain.prefer_iterative);
  if (impl_->use_cg) {
    impl_->cg.setTolerance(1e-14);
    impl_->cg.setMaxIterations(20000);
    impl_->cg.compute(impl_->m);
  } else {
    impl_->lu.compute(impl_->m);
    if (impl_->lu.info() != Eigen::Success)
      throw std::runtime_error("singular transient block");
  }
}

ChainSolver::~ChainSolver() = default;
ChainSolver::ChainSolver(ChainSolver&&) noexcept = default;
ChainSolver& ChainSolver::operator=(ChainSolver&&) noexcept = default;

namespace {

ChainSolution finish(const Eigen::SparseMatrix<double>& m,
                     const Eigen::VectorXd& rhs, Eigen::VectorXd x,
                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>&
                         resolve) {
  // iterative refinement until the residual stalls
  double rhs_norm = rhs.cwiseAbs().maxCoeff() + 1e-300;
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 4; ++it) {
    Eigen::VectorXd r = rhs - m * x;
    double rn = r.cwiseAbs().maxCoeff();
    if (rn >= best || rn < 1e-15 * rhs_norm) {
      best = std::min(best, rn);
      break;
    }
    best = rn;
    x += resolve(r);
  }
  ChainSolution out;
  out.values.assign(x.data(), x.data() + x.size());
  out.residual = best / rhs_norm;
  return out;
}

}  // namespace

ChainSolution ChainSolver::solve(const std::vector<double>& b) const {
  if (b.size() != chain_->n_transient) throw std::invalid_argument("rhs size mismatch");
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), b.size());
  if (impl_->use_cg) {
    Eigen::VectorXd x = impl_->cg.solve(rhs);
    return finish(impl_->m, rhs, std::move(x),
                  [&](const Eigen::VectorXd& r) { return impl_->cg.solve(r).eval(); });
  }
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  return finish(impl_->m, rhs, std::move(x),
                [&](const Eigen::VectorXd& r) { return impl_->lu.solve(r).eval(); });
}

ChainSolution ChainSolver::solve_transposed(const std::vector<double>& b) const {
  if (b.size() != chain_->n_transient) throw std::invalid_argument("rhs size mismatch");
  if (chain_->symmetric) return solve(b);
  if (!impl_->lut_ready) {
    impl_->mt = impl_->m.transpose();
    impl_->mt.makeCompressed();
    impl_->lut.compute(impl_->mt);
    if (impl_->lut.info() != Eigen::Success)
      throw std::runtime_error("singular transposed block");
    impl_->lut_ready = true;
  }
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), b.size());
  Eigen::VectorXd x = impl_->lut.solve(rhs);
  return finish(impl_->mt, rhs, std::move(x),
                [&](const Eigen::VectorXd& r) { return impl_->lut.solve(r).eval(); });
}

ChainSolution ChainSolver::absorption_from(const std::vector<double>& start) const {
  auto occ = solve_transposed(start);  // expected visits per state
  ChainSolution out;
  out.residual = occ.residual;
  out.values.assign(chain_->n_absorbing(), 0.0);
  for (std::size_t i = 0; i < chain_->n_transient; ++i)
    for (auto& [t, p] : chain_->absorb[i]) out.values[t] += occ.values[i] * p;
  return out;
}

ChainSolution ChainSolver::absorption_to(std::size_t target) const {
  std::vector<double> rhs(chain_->n_transient, 0.0);
  for (std::size_t i = 0; i < chain_->n_transient; ++i)
    for (auto& [t, p] : chain_->absorb[i])
      if (t == target) rhs[i] += p;
  return solve(rhs);
}

ChainSolution ChainSolver::visits_to(std::size_t y) const {
  std::vector<double> rhs(chain_->n_transient, 0.0);
  rhs.at(y) = 1.0;
  return solve(rhs);
}

ChainSolution chain_hitting(const AbsorbingChain& chain, std::size_t start) {
  ChainSolver solver(chain);
  std::vector<double> w(chain.n_transient, 0.0);
  w.at(start) = 1.0;
  return solver.absorption_from(w);
}

namespace {

LatticeChain build_lattice_chain(const SiteSet& a,
                                 const std::function<bool(const Point&)>& inside,
                                 const std::vector<Point>& seeds) {
  const int d = a.dim();
  const double inv = 1.0 / (2.0 * d);
  // collect the domain by flood fill from the seeds
  std::vector<Point> states;
  {
    std::unordered_set<Point, PointHash> seen;
    std::deque<Point> queue;
    for (const auto& s : seeds)
      if (inside(s) && !a.contains(s) && seen.insert(s).second) queue.push_back(s);
    while (!queue.empty()) {
      Point p = queue.front();
      queue.pop_front();
      states.push_back(p);
      for (const auto& q : neighbors(p))
        if (inside(q) && !a.contains(q) && seen.insert(q).second) queue.push_back(q);
    }
  }
  LatticeChain lc;
  lc.domain_states = SiteSet(d, std::move(states));
  lc.targets = a;
  AbsorbingChain& ch = lc.chain;
  ch.n_transient = lc.domain_states.size();
  ch.symmetric = true;
  for (std::size_t t = 0; t < a.size(); ++t)
    ch.add_absorbing("a" + std::to_string(t));
  lc.exit_target = ch.add_absorbing("exit");
  ch.trans.resize(ch.n_transient);
  ch.absorb.resize(ch.n_transient);
  for (std::size_t i = 0; i < ch.n_transient; ++i) {
    const Point& p = lc.domain_states[i];
    for (const auto& q : neighbors(p)) {
      if (a.contains(q))
        ch.absorb[i].emplace_back(a.index_of(q), inv);
      else if (!inside(q))
        ch.absorb[i].emplace_back(lc.exit_target, inv);
      else
        ch.trans[i].emplace_back(lc.domain_states.index_of(q), inv);
    }
  }
  return lc;
}

}  // namespace

LatticeChain lattice_chain_ball(const SiteSet& a, double r) {
  if (a.empty()) throw std::invalid_argument("empty target set");
  for (const auto& p : a.points())
    if (p.norm_l2() >= r) throw std::invalid_argument("set not strictly inside ball");
  const double r2 = r * r;
  auto inside = [r2](const Point& p) {
    double s = 0;
    for (int i = 0; i < p.d; ++i) s += double(p.c[i]) * double(p.c[i]);
    return s <= r2;
  };
  std::vector<Point> seeds = neighbors(a[0]);
  seeds.push_back(Point::origin(a.dim()));
  // seed also from the sphere's inner shell along the first axis
  Point far_seed = Point::origin(a.dim());
  far_seed.c[0] = static_cast<std::int64_t>(std::floor(r));
  seeds.push_back(far_seed);
  for (const auto& p : a.points())
    for (const auto& q : neighbors(p)) seeds.push_back(q);
  return build_lattice_chain(a, inside, seeds);
}

LatticeChain lattice_chain_box(const SiteSet& a, std::int64_t margin) {
  if (a.empty()) throw std::invalid_argument("empty target set");
  Box w = a.bbox().expanded(margin);
  auto inside = [w](const Point& p) { return w.contains(p); };
  std::vector<Point> seeds;
  for (const auto& p : a.points())
    for (const auto& q : neighbors(p)) seeds.push_back(q);
  Point corner = Point::origin(a.dim());
  for (int i = 0; i < a.dim(); ++i) corner.c[i] = w.lo[i];
  seeds.push_back(corner);
  return build_lattice_chain(a, inside, seeds);
}

}  // namespace harmlat
