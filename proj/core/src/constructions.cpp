#include "harmlat/constructions.hpp"

#include <random>
#include <stdexcept>
#include <unordered_set>

#include "harmlat/lattice.hpp"

namespace harmlat {

TubeSet tube_set(std::int64_t m) {
  if (m < 2) throw std::invalid_argument("tube_set requires m >= 2");
  std::vector<Point> pts;
  for (std::int64_t x = 0; x <= m; ++x) {
    pts.emplace_back(x, std::int64_t(0));
    pts.emplace_back(x, std::int64_t(2));
  }
  TubeSet t;
  t.z = Point(m, 1);
  t.y = Point(m - 1, 1);
  pts.push_back(t.z);
  pts.push_back(t.y);
  t.set = SiteSet(2, std::move(pts));
  return t;
}

namespace {

// The canonical square-spiral point sequence: a unit-width corridor winding
// clockwise around the origin with arm spacing 3. Frozen; spiral_set(n)
// returns its first n points.
const std::vector<std::pair<std::int64_t, std::int64_t>> kSpiralSequence = {
    {0, 0},    {0, 1},    {0, -1},   {-1, 1},   {-2, 0},   {1, 0},
    {-1, -2},  {-2, -3},  {-3, -2},  {-4, -1},  {-5, 0},   {-4, 1},
    {-3, 2},   {-2, 3},   {-1, 4},   {0, 4},    {1, 3},    {2, 2},
    {3, 1},    {4, 0},    {3, -1},   {2, -2},   {1, -3},   {0, -4},
    {-1, -5},  {-2, -6},  {-3, -5},  {-4, -4},  {-5, -3},  {-6, -2},
    {-7, -1},  {-8, 0},   {-7, 1},   {-6, 2},   {-5, 3},   {-4, 4},
    {-3, 5},   {-2, 6},   {-1, 7},   {0, 7},    {1, 6},    {2, 5},
    {3, 4},    {4, 3},    {5, 2},    {6, 1},    {7, 0},    {6, -1},
    {5, -2},   {4, -3},   {3, -4},   {2, -5},   {1, -6},   {0, -7},
    {-1, -8},  {-2, -9},  {-3, -8},  {-4, -7},  {-5, -6},  {-6, -5},
    {-7, -4},  {-8, -3},  {-9, -2},  {-10, -1}, {-11, 0},  {-10, 1},
    {-9, 2},   {-8, 3},   {-7, 4},   {-6, 5},   {-5, 6},   {-4, 7},
    {-3, 8},   {-2, 9},   {-1, 10},  {0, 10}};

}  // namespace

std::size_t spiral_sequence_length() { return kSpiralSequence.size(); }

SiteSet spiral_set(std::size_t n) {
  if (n < 2) throw std::invalid_argument("spiral_set requires n >= 2");
  if (n > kSpiralSequence.size())
    throw std::invalid_argument("spiral_set: n beyond the frozen sequence");
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pts.emplace_back(kSpiralSequence[i].first, kSpiralSequence[i].second);
  return SiteSet(2, std::move(pts));
}

SiteSet tetration_set(int n, int cap_k) {
  if (n < 2) throw std::invalid_argument("tetration_set requires n >= 2");
  if (cap_k > 4) throw std::invalid_argument("tetration_set: cap_k > 4 overflows");
  if (n - 2 > cap_k) throw std::invalid_argument("tetration_set: tower exceeds cap");
  std::vector<Point> pts{Point(std::int64_t(0), 0)};
  std::int64_t t = 1;  // ^0 2
  for (int k = 0; k <= n - 2; ++k) {
    pts.emplace_back(t, std::int64_t(0));
    if (k <= 3) t = std::int64_t(1) << t;  // ^{k+1} 2 = 2^(^k 2)
  }
  return SiteSet(2, std::move(pts));
}

namespace {

// Vertices of the axis-aligned broken line through the given waypoints.
std::vector<Point> broken_line(const std::vector<Point>& waypoints) {
  std::vector<Point> out;
  out.push_back(waypoints.front());
  for (std::size_t s = 1; s < waypoints.size(); ++s) {
    Point cur = out.back();
    const Point& goal = waypoints[s];
    int axis = -1;
    for (int i = 0; i < cur.d; ++i)
      if (cur[i] != goal[i]) {
        if (axis != -1)
          throw std::logic_error("broken-line segment not axis-aligned");
        axis = i;
      }
    if (axis == -1) continue;
    const std::int64_t step = goal[axis] > cur[axis] ? 1 : -1;
    while (cur[axis] != goal[axis]) {
      cur.c[axis] += step;
      out.push_back(cur);
    }
  }
  return out;
}

bool in_box(const Point& p, std::int64_t n) {
  for (int i = 0; i < p.d; ++i)
    if (std::llabs(p.c[i]) > n) return false;
  return true;
}

}  // namespace

KleinParts klein_bottle(std::int64_t n, int d) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("klein_bottle: n must be even >= 2");
  if (d < 3) throw std::invalid_argument("klein_bottle requires d >= 3");
  KleinParts kp;

  // corner-free shell: exactly one coordinate at absolute value n
  std::vector<Point> shell;
  {
    // enumerate faces: fix axis i at +-n, others in [-(n-1), n-1]
    std::vector<std::int64_t> c(d, -(n - 1));
    for (int axis = 0; axis < d; ++axis) {
      for (int sign = 0; sign < 2; ++sign) {
        std::fill(c.begin(), c.end(), -(n - 1));
        bool done = false;
        while (!done) {
          Point p(std::vector<std::int64_t>(c.begin(), c.end()));
          p.c[axis] = sign ? n : -n;
          shell.push_back(p);
          // odometer over the free axes
          done = true;
          for (int i = 0; i < d; ++i) {
            if (i == axis) continue;
            if (c[i] < n - 1) {
              ++c[i];
              done = false;
              break;
            }
            c[i] = -(n - 1);
          }
        }
      }
    }
  }
  kp.shell = SiteSet(d, std::move(shell));

  auto pt = [d](std::int64_t a, std::int64_t b) {
    std::vector<std::int64_t> c(d, 0);
    c[0] = a;
    c[1] = b;
    return Point(std::move(c));
  };
  kp.x1 = pt(0, n);
  kp.x2 = pt(n, 0);
  kp.x3 = pt(n / 2, -n);

  // puncture: drop the marked vertices and their lattice neighbors
  std::unordered_set<Point, PointHash> drop;
  for (const Point& x : {kp.x1, kp.x2, kp.x3}) {
    drop.insert(x);
    for (const auto& q : neighbors(x)) drop.insert(q);
  }
  std::vector<Point> punct;
  for (const auto& p : kp.shell.points())
    if (!drop.count(p)) punct.push_back(p);
  kp.punctured = SiteSet(d, std::move(punct));

  kp.eta_outer = broken_line({kp.x1, pt(0, 2 * n), pt(2 * n, 2 * n), pt(2 * n, 0), kp.x2});
  kp.eta_inner = broken_line({kp.x2, pt(n / 2, 0), kp.x3});

  // tube walls: outer boundary of the line's range, clipped to the outside
  // of the box (outer tube) or the open box (inner tube)
  SiteSet range_o(d, kp.eta_outer), range_i(d, kp.eta_inner);
  const SiteSet wall_o = boundary(range_o, BoundaryKind::outer);
  const SiteSet wall_i = boundary(range_i, BoundaryKind::outer);
  std::vector<Point> to, ti;
  for (const auto& p : wall_o.points())
    if (!in_box(p, n)) to.push_back(p);
  for (const auto& p : wall_i.points())
    if (in_box(p, n - 1)) ti.push_back(p);
  kp.tube_outer = SiteSet(d, std::move(to));
  kp.tube_inner = SiteSet(d, std::move(ti));

  kp.set = kp.punctured.unite(kp.tube_outer).unite(kp.tube_inner)
               .unite(SiteSet(d, {Point::origin(d)}));
  return kp;
}

GalleryChain hairs_chain(int k, int r) {
  if (k < 1) throw std::invalid_argument("hairs_chain requires k >= 1");
  if (r <= k + 2) throw std::invalid_argument("hairs_chain requires r > k + 2");
  // states: spine s_i (|i| <= r), hair h_i per spine vertex, wired state zeta.
  // absorbing: spine 0, spine -1, hair k.
  GalleryChain g;
  AbsorbingChain& ch = g.chain;
  const std::size_t t_spine0 = ch.add_absorbing("spine0");
  const std::size_t t_spinem1 = ch.add_absorbing("spine-1");
  const std::size_t t_hairk = ch.add_absorbing("hair" + std::to_string(k));

  auto is_abs_spine = [](int i) { return i == 0 || i == -1; };
  std::vector<std::size_t> spine_id(2 * r + 1, SIZE_MAX), hair_id(2 * r + 1, SIZE_MAX);
  std::size_t next = 0;
  auto add_state = [&](const std::string& label) {
    g.state_labels.push_back(label);
    return next++;
  };
  for (int i = -r; i <= r; ++i) {
    if (!is_abs_spine(i)) spine_id[i + r] = add_state("s" + std::to_string(i));
    if (i != k) hair_id[i + r] = add_state("h" + std::to_string(i));
  }
  const std::size_t zeta = add_state("zeta");
  g.start_state = zeta;
  ch.n_transient = next;
  ch.trans.resize(next);
  ch.absorb.resize(next);

  auto link_spine = [&](std::size_t from, int j, double p) {
    if (j < -r || j > r) {
      ch.trans[from].emplace_back(zeta, p);  // folded into the wired state
    } else if (j == 0)
      ch.absorb[from].emplace_back(t_spine0, p);
    else if (j == -1)
      ch.absorb[from].emplace_back(t_spinem1, p);
    else
      ch.trans[from].emplace_back(spine_id[j + r], p);
  };
  for (int i = -r; i <= r; ++i) {
    // hair: degree 1, moves to its spine vertex
    if (i != k) link_spine(hair_id[i + r], i, 1.0);
    if (is_abs_spine(i)) continue;
    const std::size_t s = spine_id[i + r];
    link_spine(s, i - 1, 1.0 / 3.0);
    link_spine(s, i + 1, 1.0 / 3.0);
    if (i == k)
      ch.absorb[s].emplace_back(t_hairk, 1.0 / 3.0);
    else
      ch.trans[s].emplace_back(hair_id[i + r], 1.0 / 3.0);
  }
  // wired state: steps back onto either truncation end
  link_spine(zeta, r, 0.5);
  link_spine(zeta, -r, 0.5);
  ch.validate();
  return g;
}

GalleryChain tree_tunnel_chain(int n) {
  if (n < 2) throw std::invalid_argument("tree_tunnel_chain requires n >= 2");
  GalleryChain g;
  AbsorbingChain& ch = g.chain;
  const std::size_t t_goal = ch.add_absorbing("goal");
  const std::size_t t_dead = ch.add_absorbing("dead");
  // transient positions 2..n-1, stored as index i-2
  const std::size_t m = n - 2;
  ch.n_transient = m;
  ch.trans.resize(m);
  ch.absorb.resize(m);
  for (std::size_t idx = 0; idx < m; ++idx) {
    const int i = int(idx) + 2;
    g.state_labels.push_back("q" + std::to_string(i));
    const double p = 1.0 / 3.0;
    if (i - 1 == 1)
      ch.absorb[idx].emplace_back(t_goal, p);
    else
      ch.trans[idx].emplace_back(idx - 1, p);
    if (i + 1 == n)
      ch.absorb[idx].emplace_back(t_dead, p);
    else
      ch.trans[idx].emplace_back(idx + 1, p);
    ch.absorb[idx].emplace_back(t_dead, p);  // the third tree branch
  }
  g.start_state = m == 0 ? 0 : m - 1;
  if (m > 0) ch.validate();
  return g;
}

SiteSet random_site_set(const RandomSiteParams& params, std::uint64_t seed) {
  if (params.size == 0) throw std::invalid_argument("random_site_set: empty size");
  if (params.d < 2 || params.d > 4) throw std::invalid_argument("random_site_set: bad dimension");
  const std::int64_t w = params.window;
  if (w < 1) throw std::invalid_argument("random_site_set: bad window");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(-w, w);
  const Point origin = Point::origin(params.d);

  for (int attempt = 0; attempt < 400; ++attempt) {
    std::vector<Point> pts;
    std::unordered_set<Point, PointHash> seen;
    auto add = [&](const Point& p) {
      if (seen.insert(p).second) pts.push_back(p);
    };
    if (params.star_connected) {
      add(origin);
      int stall = 0;
      while (pts.size() < params.size && stall < 4000) {
        const Point& base = pts[std::uniform_int_distribution<std::size_t>(
            0, pts.size() - 1)(rng)];
        auto nb = star_neighbors(base);
        const Point& cand = nb[std::uniform_int_distribution<std::size_t>(
            0, nb.size() - 1)(rng)];
        bool ok = true;
        for (int i = 0; i < cand.d; ++i)
          if (std::llabs(cand.c[i]) > w) ok = false;
        if (ok && seen.insert(cand).second)
          pts.push_back(cand);
        else
          ++stall;
      }
      if (pts.size() < params.size) continue;
    } else {
      if (params.require_origin) add(origin);
      int stall = 0;
      while (pts.size() < params.size && stall < 100000) {
        std::vector<std::int64_t> c(params.d);
        for (auto& v : c) v = coord(rng);
        Point p(std::move(c));
        if (seen.insert(p).second)
          pts.push_back(p);
        else
          ++stall;
      }
      if (pts.size() < params.size) continue;
    }
    SiteSet s(params.d, pts);
    if (params.require_origin && !s.contains(origin)) continue;
    if (params.require_origin_exposed) {
      if (!s.contains(origin)) continue;
      if (outside_neighborhood(s, origin, NeighborhoodVariant::infinite,
                               Adjacency::plain)
              .empty())
        continue;
    }
    return s;
  }
  throw std::runtime_error("random_site_set: constraints infeasible");
}

}  // namespace harmlat
