#include "harmlat/strategy.hpp"

#include <deque>

namespace harmlat {

const char* to_string(RemovalCase c) {
  switch (c) {
    case RemovalCase::dead: return "dead";
    case RemovalCase::c1a: return "1a";
    case RemovalCase::c1b: return "1b";
    case RemovalCase::c2: return "2";
    case RemovalCase::c3: return "3";
  }
  return "?";
}

const char* to_string(RemovalType t) {
  switch (t) {
    case RemovalType::trivial: return "trivial";
    case RemovalType::i: return "i";
    case RemovalType::ii: return "ii";
    case RemovalType::iii: return "iii";
  }
  return "?";
}

bool is_marginal_vertex(const SiteSet& a, const Point& z,
                        const ComplementDecomposition& dec, bool check_connected) {
  if (!a.contains(z)) throw std::out_of_range("marginality base not in set");
  if (check_connected && !is_connected(a, Adjacency::star))
    throw std::invalid_argument("marginality requires a *-connected ambient set");
  SiteSet n_inf = outside_neighborhood(a, z, NeighborhoodVariant::infinite,
                                       Adjacency::plain, dec);
  if (n_inf.size() <= 1) return true;
  SiteSet n_inf_star = outside_neighborhood(a, z, NeighborhoodVariant::infinite,
                                            Adjacency::star, dec);
  // plain-path reachability inside the exterior *-neighborhood
  std::unordered_set<Point, PointHash> seen;
  std::deque<Point> queue{n_inf[0]};
  seen.insert(n_inf[0]);
  while (!queue.empty()) {
    Point p = queue.front();
    queue.pop_front();
    for (const auto& q : neighbors(p)) {
      if (n_inf_star.contains(q) && !seen.count(q)) {
        seen.insert(q);
        queue.push_back(q);
      }
    }
  }
  for (const auto& u : n_inf.points())
    if (!seen.count(u)) return false;
  return true;
}

bool is_marginal_vertex(const SiteSet& a, const Point& z, bool check_connected) {
  ComplementDecomposition dec(a);
  return is_marginal_vertex(a, z, dec, check_connected);
}

bool is_star_cut_vertex(const SiteSet& a, const Point& z, bool check_connected) {
  if (!a.contains(z)) throw std::out_of_range("cut-vertex base not in set");
  if (check_connected && !is_connected(a, Adjacency::star))
    throw std::invalid_argument("cut-vertex test requires a *-connected set");
  if (a.size() == 1) return false;
  return clusters(a.without(z), Adjacency::star).size() >= 2;
}

namespace {

// Farthest vertex from src in the *-graph of a; lexicographic tie-break.
Point star_bfs_farthest(const SiteSet& a, const Point& src) {
  std::unordered_map<Point, std::int64_t, PointHash> dist;
  std::deque<Point> queue{src};
  dist[src] = 0;
  Point best = src;
  std::int64_t best_d = 0;
  while (!queue.empty()) {
    Point p = queue.front();
    queue.pop_front();
    std::int64_t dp = dist[p];
    if (dp > best_d || (dp == best_d && p < best)) {
      best = p;
      best_d = dp;
    }
    for (const auto& q : star_neighbors(p)) {
      if (a.contains(q) && !dist.count(q)) {
        dist[q] = dp + 1;
        queue.push_back(q);
      }
    }
  }
  return best;
}

}  // namespace

Point non_cut_vertex(const SiteSet& a, std::optional<Point> forbidden) {
  if (a.empty()) throw std::invalid_argument("non-cut vertex of empty set");
  if (!is_connected(a, Adjacency::star))
    throw std::invalid_argument("non-cut vertex requires a *-connected set");
  if (a.size() == 1) return a[0];
  // An endpoint of a *-graph diameter realizer cannot disconnect the set;
  // verify anyway and fall back to a scan.
  Point u = star_bfs_farthest(a, a[0]);
  Point v = star_bfs_farthest(a, u);
  for (const Point& cand : {v, u}) {
    if (forbidden && cand == *forbidden) continue;
    if (!is_star_cut_vertex(a, cand, false)) return cand;
  }
  std::optional<Point> fallback;
  for (const auto& z : a.points()) {
    if (is_star_cut_vertex(a, z, false)) continue;
    if (forbidden && z == *forbidden) {
      if (!fallback) fallback = z;
      continue;
    }
    return z;
  }
  if (fallback) return *fallback;
  throw std::logic_error("no non-cut vertex found");
}

RemovalDecision select_removal_vertex(const SiteSet& a) {
  if (a.dim() != 2) throw std::invalid_argument("selection rule is d=2 only");
  const Point zero = Point::origin(2);
  if (!a.contains(zero)) throw std::invalid_argument("origin must belong to the set");
  if (a.size() < 2) throw std::invalid_argument("need at least two points");
  ComplementDecomposition dec(a);
  SiteSet n_inf_0 = outside_neighborhood(a, zero, NeighborhoodVariant::infinite,
                                         Adjacency::plain, dec);
  if (n_inf_0.empty())
    throw std::invalid_argument("origin is enclosed (harmonic measure zero)");

  // Step 0: a vertex with no exposure to the exterior can go for free.
  for (const auto& z : a.points()) {
    if (z == zero) continue;
    if (outside_neighborhood(a, z, NeighborhoodVariant::infinite, Adjacency::plain, dec)
            .empty())
      return {z, RemovalCase::dead, RemovalType::trivial, std::nullopt, std::nullopt};
  }

  if (is_connected(a, Adjacency::star)) {
    // Case 1: walk the clockwise ring around the origin from the smallest
    // exterior neighbor until the first point of A.
    const Point zpp = n_inf_0[0];
    auto ring = star_neighbors(zero);
    std::size_t start = 0;
    while (ring[start] != zpp) ++start;
    Point prev = zpp;
    Point z_diamond = zpp;
    bool found = false;
    for (std::size_t k = 1; k <= ring.size(); ++k) {
      Point cur = ring[(start + k) % ring.size()];
      if (a.contains(cur)) {
        z_diamond = cur;
        found = true;
        break;
      }
      prev = cur;
    }
    if (!found) throw std::logic_error("no set point on the ring of a *-connected set");
    if (!is_star_cut_vertex(a, z_diamond, false))
      return {z_diamond, RemovalCase::c1a, RemovalType::i, prev, std::nullopt};
    // Case 1b: smallest marginal vertex of A in the clusters away from 0.
    auto parts = clusters(a.without(z_diamond), Adjacency::star);
    std::optional<Point> best;
    std::optional<std::size_t> best_cluster;
    for (std::size_t ci = 0; ci < parts.size(); ++ci) {
      if (parts[ci].contains(zero)) continue;
      for (const auto& z : parts[ci].points()) {
        if (is_marginal_vertex(a, z, dec, false) && (!best || z < *best)) {
          best = z;
          best_cluster = ci;
        }
      }
    }
    if (!best) throw std::logic_error("no marginal vertex across a cut");
    return {*best, RemovalCase::c1b, RemovalType::ii, std::nullopt, best_cluster};
  }

  auto parts = clusters(a, Adjacency::star);
  // Case 2: a non-origin cluster of size >= 2, scanned in cluster order.
  for (std::size_t ci = 0; ci < parts.size(); ++ci) {
    if (parts[ci].contains(zero) || parts[ci].size() < 2) continue;
    ComplementDecomposition cdec(parts[ci]);
    std::optional<Point> best;
    for (const auto& z : parts[ci].points())
      if (is_marginal_vertex(parts[ci], z, cdec, false) && (!best || z < *best))
        best = z;
    if (!best) throw std::logic_error("cluster without marginal vertex");
    return {*best, RemovalCase::c2, RemovalType::ii, std::nullopt, ci};
  }
  // Case 3: all non-origin clusters are singletons; take the smallest one.
  for (const auto& part : parts) {
    if (part.contains(zero)) continue;
    return {part[0], RemovalCase::c3, RemovalType::iii, std::nullopt, std::nullopt};
  }
  throw std::logic_error("unreachable: disconnected set with a single cluster");
}

}  // namespace harmlat
