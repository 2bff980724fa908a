#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "harmlat/chain.hpp"
#include "harmlat/constructions.hpp"
#include "harmlat/lattice.hpp"
#include "harmlat/solver.hpp"

using namespace harmlat;

TEST_CASE("tube: shape and labels") {
  auto t = tube_set(2);
  CHECK(t.set.size() == 8);
  CHECK(t.set.contains(Point(0, 0)));
  CHECK(t.set.contains(Point(2, 2)));
  CHECK(t.y == Point(1, 1));
  CHECK(t.z == Point(2, 1));
  CHECK(t.set.contains(t.y));
  CHECK(t.set.contains(t.z));
  CHECK_THROWS(tube_set(1));

  for (std::int64_t m : {2, 5, 8}) {
    auto tm = tube_set(m);
    CHECK(tm.set.size() == std::size_t(2 * m + 4));
    for (std::int64_t x = 0; x <= m; ++x) {
      CHECK(tm.set.contains(Point(x, 0)));
      CHECK(tm.set.contains(Point(x, 2)));
    }
  }
}

TEST_CASE("tube: y is exposed only through the corridor") {
  auto t = tube_set(5);
  auto n_inf = outside_neighborhood(t.set, t.y, NeighborhoodVariant::infinite);
  REQUIRE(n_inf.size() == 1);
  CHECK(n_inf[0] == Point(3, 1));  // one step deeper into the corridor
  // the interior corridor cells are still part of the infinite cluster
  // (reachable through the open left mouth), never enclosed
  ComplementDecomposition dec(t.set);
  for (std::int64_t x = 0; x <= 3; ++x) CHECK(dec.in_infinite(Point(x, 1)));
  CHECK(dec.zero_reaches_infinity());
}

TEST_CASE("tube: removing the plug raises the measure a lot") {
  auto t = tube_set(8);
  double rho = removal_price(t.set, t.y, t.z, 1e-9, MeasureMethod::dense_kernel);
  CHECK(rho > 10.0);
}

TEST_CASE("spiral: frozen prefix and set invariants") {
  CHECK_THROWS(spiral_set(1));
  CHECK_THROWS(spiral_set(spiral_sequence_length() + 1));
  auto d2 = spiral_set(2);
  CHECK(d2.size() == 2);
  CHECK(d2.contains(Point(0, 0)));
  CHECK(d2.contains(Point(0, 1)));
  auto d6 = spiral_set(6);
  for (auto p : {Point(0, -1), Point(-1, 1), Point(-2, 0), Point(1, 0)})
    CHECK(d6.contains(p));
  for (std::size_t n = 2; n <= spiral_sequence_length(); ++n) {
    auto dn = spiral_set(n);
    CHECK(dn.size() == n);  // the sequence never repeats a point
    CHECK(dn.contains(Point(0, 0)));
    CHECK(is_connected(dn, Adjacency::star));
  }
}

TEST_CASE("spiral: the corridor stays open from the origin") {
  for (std::size_t n : {10, 30, 50, 75}) {
    ComplementDecomposition dec(spiral_set(n));
    CHECK(dec.zero_reaches_infinity());
  }
}

TEST_CASE("tetration: tower coordinates") {
  auto t3 = tetration_set(3);
  CHECK(t3.size() == 3);
  CHECK(t3.contains(Point(0, 0)));
  CHECK(t3.contains(Point(1, 0)));
  CHECK(t3.contains(Point(2, 0)));
  auto t6 = tetration_set(6);
  CHECK(t6.size() == 6);
  CHECK(t6.contains(Point(4, 0)));
  CHECK(t6.contains(Point(16, 0)));
  CHECK(t6.contains(Point(65536, 0)));
  CHECK(t6.bbox().hi[0] == 65536);
  CHECK_THROWS(tetration_set(7));
  CHECK_THROWS(tetration_set(1));
}

// ---------------------------------------------------------------------------
// Independent re-enumeration oracle for the Klein bottle: membership is
// recomputed from scratch by predicates over a bounding box, with no shared
// code with the builder.
namespace {

using P3 = std::array<std::int64_t, 3>;

std::set<P3> klein_oracle(std::int64_t n) {
  auto linf = [](const P3& p) {
    return std::max({std::llabs(p[0]), std::llabs(p[1]), std::llabs(p[2])});
  };
  auto in_shell = [&](const P3& p) {
    if (linf(p) > n) return false;
    int at = 0;
    for (auto c : p) at += (std::llabs(c) == n);
    return at == 1;
  };
  const std::vector<P3> marked = {{0, n, 0}, {n, 0, 0}, {n / 2, -n, 0}};
  auto dropped = [&](const P3& p) {
    for (const auto& x : marked) {
      std::int64_t l1 = std::llabs(p[0] - x[0]) + std::llabs(p[1] - x[1]) +
                        std::llabs(p[2] - x[2]);
      if (l1 <= 1) return true;
    }
    return false;
  };
  // ranges of the two broken lines, collected segment by segment
  std::set<P3> range_o, range_i;
  auto add_seg = [](std::set<P3>& out, P3 a, P3 b) {
    int ax = a[0] != b[0] ? 0 : (a[1] != b[1] ? 1 : 2);
    std::int64_t s = b[ax] > a[ax] ? 1 : -1;
    out.insert(a);
    while (a[ax] != b[ax]) {
      a[ax] += s;
      out.insert(a);
    }
  };
  add_seg(range_o, {0, n, 0}, {0, 2 * n, 0});
  add_seg(range_o, {0, 2 * n, 0}, {2 * n, 2 * n, 0});
  add_seg(range_o, {2 * n, 2 * n, 0}, {2 * n, 0, 0});
  add_seg(range_o, {2 * n, 0, 0}, {n, 0, 0});
  add_seg(range_i, {n, 0, 0}, {n / 2, 0, 0});
  add_seg(range_i, {n / 2, 0, 0}, {n / 2, -n, 0});
  auto touches = [](const std::set<P3>& r, const P3& p) {
    if (r.count(p)) return false;  // outer boundary excludes the set itself
    for (int ax = 0; ax < 3; ++ax)
      for (std::int64_t s : {-1, 1}) {
        P3 q = p;
        q[ax] += s;
        if (r.count(q)) return true;
      }
    return false;
  };

  std::set<P3> out;
  const std::int64_t R = 2 * n + 1;
  for (std::int64_t x = -R; x <= R; ++x)
    for (std::int64_t y = -R; y <= R; ++y)
      for (std::int64_t z = -R; z <= R; ++z) {
        P3 p{x, y, z};
        bool in = false;
        if (in_shell(p) && !dropped(p)) in = true;
        if (linf(p) > n && touches(range_o, p)) in = true;
        if (linf(p) <= n - 1 && touches(range_i, p)) in = true;
        if (p == P3{0, 0, 0}) in = true;
        if (in) out.insert(p);
      }
  return out;
}

}  // namespace

TEST_CASE("klein bottle: builder matches the independent oracle") {
  for (std::int64_t n : {4, 6}) {
    auto kp = klein_bottle(n, 3);
    auto oracle = klein_oracle(n);
    CHECK(kp.set.size() == oracle.size());
    for (const auto& p : kp.set.points())
      CHECK(oracle.count({p[0], p[1], p[2]}) == 1);
  }
}

TEST_CASE("klein bottle: marked vertices and reachability") {
  auto kp = klein_bottle(6, 3);
  CHECK(kp.set.contains(Point(0, 0, 0)));
  CHECK_FALSE(kp.set.contains(kp.x1));
  CHECK_FALSE(kp.set.contains(kp.x2));
  CHECK_FALSE(kp.set.contains(kp.x3));
  CHECK(kp.x1 == Point(0, 6, 0));
  ComplementDecomposition dec(kp.set);
  CHECK(dec.zero_reaches_infinity());
  // shell size: 6 faces of (2n-1)^2 vertices
  CHECK(kp.shell.size() == std::size_t(6 * 11 * 11));
  CHECK_THROWS(klein_bottle(5, 3));
  CHECK_THROWS(klein_bottle(6, 2));
}

TEST_CASE("hairs chain: structure and limit behavior") {
  CHECK_THROWS(hairs_chain(1, 3));
  auto g = hairs_chain(1, 8);
  g.chain.validate();
  // spine states carry three outgoing moves, hairs exactly one
  for (std::size_t i = 0; i < g.chain.n_transient; ++i) {
    std::size_t deg = g.chain.trans[i].size() + g.chain.absorb[i].size();
    if (g.state_labels[i][0] == 's')
      CHECK(deg == 3);
    else if (g.state_labels[i][0] == 'h')
      CHECK(deg == 1);
    else
      CHECK(deg == 2);  // the wired state
  }
  auto h = chain_hitting(g.chain, g.start_state);
  double total = 0;
  for (double v : h.values) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  double h00 = h.values[0];  // target "spine0"
  CHECK(h00 > 0.0);
  CHECK(h00 < 0.5);

  // H(spine 0) decreases as the hair target moves away
  const int r = 60;
  double prev = 1.0;
  for (int k : {1, 4, 8, 16}) {
    auto gk = hairs_chain(k, r);
    auto hk = chain_hitting(gk.chain, gk.start_state);
    CHECK(hk.values[0] < prev);
    prev = hk.values[0];
  }
  CHECK(prev < 0.05);
}

TEST_CASE("tree tunnel: chain solve matches the closed-form recurrence") {
  auto g = tree_tunnel_chain(12);
  g.chain.validate();
  ChainSolver solver(g.chain);
  auto p_goal = solver.absorption_to(0);  // "goal"
  auto closed = tunnel_recurrence(3.0, 12, 1.0);
  for (int i = 2; i <= 11; ++i)
    CHECK(p_goal.values[i - 2] == doctest::Approx(closed.q[i]).epsilon(1e-12));
  CHECK(closed.root_small == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0));

  // consecutive escape probabilities contract by the small root
  auto g2 = tree_tunnel_chain(60);
  ChainSolver s2(g2.chain);
  auto q = s2.absorption_to(0);
  double ratio = q.values[41 - 2] / q.values[40 - 2];
  CHECK(ratio == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-10));
}

TEST_CASE("random site sets: determinism and constraints") {
  RandomSiteParams p;
  p.d = 2;
  p.size = 10;
  p.star_connected = true;
  auto a = random_site_set(p, 42);
  auto b = random_site_set(p, 42);
  CHECK(a == b);
  auto c = random_site_set(p, 43);
  CHECK(a.size() == 10);
  CHECK(clusters(a, Adjacency::star).size() == 1);
  CHECK(a.contains(Point(0, 0)));
  CHECK_FALSE(a == c);

  p.size = 1;
  CHECK(random_site_set(p, 7).size() == 1);
  CHECK(random_site_set(p, 7).contains(Point(0, 0)));

  RandomSiteParams q;
  q.d = 3;
  q.size = 12;
  q.window = 4;
  q.require_origin_exposed = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto set = random_site_set(q, s);
    CHECK(set.size() == 12);
    CHECK_FALSE(outside_neighborhood(set, Point::origin(3),
                                     NeighborhoodVariant::infinite)
                    .empty());
  }
}
