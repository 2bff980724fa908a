#include "harmlat/lattice.hpp"

#include <deque>
#include <functional>
#include <json.hpp>

namespace harmlat {

std::string siteset_to_json(const SiteSet& s) {
  nlohmann::json j;
  j["d"] = s.dim();
  auto pts = nlohmann::json::array();
  for (const auto& p : s.points()) {
    auto row = nlohmann::json::array();
    for (int i = 0; i < p.d; ++i) row.push_back(p.c[i]);
    pts.push_back(row);
  }
  j["points"] = pts;
  return j.dump();
}

SiteSet siteset_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  int d = j.at("d").get<int>();
  std::vector<Point> pts;
  for (const auto& row : j.at("points")) {
    std::vector<std::int64_t> v = row.get<std::vector<std::int64_t>>();
    if (static_cast<int>(v.size()) != d)
      throw std::invalid_argument("point arity does not match d");
    pts.emplace_back(v);
  }
  SiteSet s(d, pts);
  if (s.size() != pts.size())
    throw std::invalid_argument("duplicate points in site set JSON");
  return s;
}

std::vector<Point> neighbors(const Point& p) {
  std::vector<Point> out;
  out.reserve(2 * p.d);
  for (int a = 0; a < p.d; ++a) {
    Point q = p;
    q.c[a] += 1;
    out.push_back(q);
    q.c[a] -= 2;
    out.push_back(q);
  }
  return out;
}

std::vector<Point> star_neighbors(const Point& p) {
  std::vector<Point> out;
  if (p.d == 2) {
    static const std::int64_t cw[8][2] = {{0, 1},  {1, 1},   {1, 0},  {1, -1},
                                          {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
    out.reserve(8);
    for (auto& o : cw) out.push_back(Point(p.c[0] + o[0], p.c[1] + o[1]));
    return out;
  }
  out.reserve((p.d == 3) ? 26 : 80);
  std::array<std::int64_t, 4> off{0, 0, 0, 0};
  // odometer over {-1,0,1}^d in lexicographic order
  for (int i = 0; i < p.d; ++i) off[i] = -1;
  while (true) {
    bool all_zero = true;
    for (int i = 0; i < p.d; ++i)
      if (off[i] != 0) all_zero = false;
    if (!all_zero) {
      Point q = p;
      for (int i = 0; i < p.d; ++i) q.c[i] += off[i];
      out.push_back(q);
    }
    int i = p.d - 1;
    while (i >= 0 && off[i] == 1) {
      off[i] = -1;
      --i;
    }
    if (i < 0) break;
    ++off[i];
  }
  return out;
}

std::vector<Point> adjacent(const Point& p, Adjacency adj) {
  return adj == Adjacency::plain ? neighbors(p) : star_neighbors(p);
}

std::vector<SiteSet> clusters(const SiteSet& s, Adjacency adj) {
  std::vector<SiteSet> parts;
  std::unordered_set<Point, PointHash> seen;
  // points() is lex-sorted, so parts come out ordered by smallest member
  for (const auto& seed : s.points()) {
    if (seen.count(seed)) continue;
    std::vector<Point> comp;
    std::deque<Point> queue{seed};
    seen.insert(seed);
    while (!queue.empty()) {
      Point p = queue.front();
      queue.pop_front();
      comp.push_back(p);
      for (const auto& q : adjacent(p, adj)) {
        if (s.contains(q) && !seen.count(q)) {
          seen.insert(q);
          queue.push_back(q);
        }
      }
    }
    parts.emplace_back(s.dim(), std::move(comp));
  }
  return parts;
}

bool is_connected(const SiteSet& s, Adjacency adj) {
  return s.empty() || clusters(s, adj).size() == 1;
}

ComplementDecomposition::ComplementDecomposition(const SiteSet& a, std::int64_t margin)
    : a_(&a) {
  if (a.empty()) throw std::invalid_argument("complement decomposition of empty set");
  if (margin < 2) margin = 2;
  window_ = a.bbox().expanded(margin);
  const Point zero = Point::origin(a.dim());
  if (!window_.contains(zero)) {
    // Widen until the origin is inside so the zero-cluster fill has a seat.
    Box b = window_;
    for (int i = 0; i < a.dim(); ++i) {
      b.lo[i] = std::min<std::int64_t>(b.lo[i], -margin);
      b.hi[i] = std::max<std::int64_t>(b.hi[i], margin);
    }
    window_ = b;
  }

  // Flood the infinite cluster from the whole window shell.
  std::deque<Point> queue;
  auto push_inf = [&](const Point& p) {
    if (!a.contains(p) && !infinite_.count(p)) {
      infinite_.insert(p);
      queue.push_back(p);
    }
  };
  {
    // enumerate the shell: points with at least one coordinate at lo/hi
    std::vector<Point> stack;
    Point cur = Point::origin(a.dim());
    std::function<void(int, bool)> rec = [&](int axis, bool pinned) {
      if (axis == a.dim()) {
        if (pinned) push_inf(cur);
        return;
      }
      for (std::int64_t v = window_.lo[axis]; v <= window_.hi[axis]; ++v) {
        cur.c[axis] = v;
        rec(axis + 1, pinned || v == window_.lo[axis] || v == window_.hi[axis]);
      }
    };
    rec(0, false);
  }
  while (!queue.empty()) {
    Point p = queue.front();
    queue.pop_front();
    for (const auto& q : neighbors(p))
      if (window_.contains(q)) push_inf(q);
  }

  // Flood the cluster of A^c u {0} containing 0.
  zero_.insert(zero);
  queue.push_back(zero);
  while (!queue.empty()) {
    Point p = queue.front();
    queue.pop_front();
    if (p != zero && infinite_.count(p)) zero_reaches_infinity_ = true;
    for (const auto& q : neighbors(p)) {
      if (!window_.contains(q) || a.contains(q) || zero_.count(q)) continue;
      zero_.insert(q);
      queue.push_back(q);
    }
  }
  if (!zero_reaches_infinity_ && !a.contains(zero) && infinite_.count(zero))
    zero_reaches_infinity_ = true;
  if (zero_reaches_infinity_) {
    // The zero cluster merges with the infinite one; complete the mask.
    for (const auto& p : infinite_) zero_.insert(p);
  }
}

bool ComplementDecomposition::in_infinite(const Point& p) const {
  if (a_->contains(p)) return false;
  if (!window_.contains(p)) return true;
  return infinite_.count(p) > 0;
}

bool ComplementDecomposition::in_zero(const Point& p) const {
  if (p == Point::origin(a_->dim())) return true;
  if (a_->contains(p)) return false;
  if (!window_.contains(p)) return zero_reaches_infinity_;
  return zero_.count(p) > 0;
}

namespace {

SiteSet boundary_impl(const SiteSet& a, BoundaryKind kind, Adjacency adj,
                      const ComplementDecomposition* dec) {
  const bool outer = kind == BoundaryKind::outer || kind == BoundaryKind::outer_ext ||
                     kind == BoundaryKind::outer_zero;
  auto keep = [&](const Point& q) {
    if (a.contains(q)) return false;
    switch (kind) {
      case BoundaryKind::outer:
      case BoundaryKind::inner:
        return true;
      case BoundaryKind::outer_ext:
      case BoundaryKind::inner_ext:
        return dec->in_infinite(q);
      case BoundaryKind::outer_zero:
      case BoundaryKind::inner_zero:
        return dec->in_zero(q);
    }
    return false;
  };
  std::vector<Point> out;
  for (const auto& y : a.points()) {
    bool hit = false;
    for (const auto& q : adjacent(y, adj)) {
      if (keep(q)) {
        if (outer)
          out.push_back(q);
        else
          hit = true;
      }
    }
    if (!outer && hit) out.push_back(y);
  }
  return SiteSet(a.dim(), std::move(out));
}

}  // namespace

SiteSet boundary(const SiteSet& a, BoundaryKind kind, Adjacency adj) {
  if (a.empty()) return SiteSet(a.dim());
  if (kind == BoundaryKind::outer || kind == BoundaryKind::inner)
    return boundary_impl(a, kind, adj, nullptr);
  ComplementDecomposition dec(a);
  return boundary_impl(a, kind, adj, &dec);
}

SiteSet boundary(const SiteSet& a, BoundaryKind kind, Adjacency adj,
                 const ComplementDecomposition& dec) {
  return boundary_impl(a, kind, adj, &dec);
}

SiteSet outside_neighborhood(const SiteSet& a, const Point& y,
                             NeighborhoodVariant variant, Adjacency adj) {
  if (variant == NeighborhoodVariant::all) {
    if (!a.contains(y)) throw std::out_of_range("neighborhood base not in set");
    std::vector<Point> out;
    for (const auto& q : adjacent(y, adj))
      if (!a.contains(q)) out.push_back(q);
    return SiteSet(a.dim(), std::move(out));
  }
  ComplementDecomposition dec(a);
  return outside_neighborhood(a, y, variant, adj, dec);
}

SiteSet outside_neighborhood(const SiteSet& a, const Point& y,
                             NeighborhoodVariant variant, Adjacency adj,
                             const ComplementDecomposition& dec) {
  if (!a.contains(y)) throw std::out_of_range("neighborhood base not in set");
  std::vector<Point> out;
  for (const auto& q : adjacent(y, adj)) {
    if (a.contains(q)) continue;
    bool ok = true;
    if (variant == NeighborhoodVariant::infinite) ok = dec.in_infinite(q);
    if (variant == NeighborhoodVariant::zero) ok = dec.in_zero(q);
    if (ok) out.push_back(q);
  }
  return SiteSet(a.dim(), std::move(out));
}

PathProperties path_ops(const Path& eta) {
  if (eta.vertices.empty()) throw std::invalid_argument("empty path");
  for (std::size_t i = 1; i < eta.vertices.size(); ++i) {
    std::int64_t step = eta.kind == Adjacency::plain
                            ? eta.vertices[i].l1(eta.vertices[i - 1])
                            : eta.vertices[i].linf(eta.vertices[i - 1]);
    if (step != 1) throw std::invalid_argument("malformed path step at index " +
                                               std::to_string(i));
  }
  PathProperties props;
  props.length = static_cast<std::int64_t>(eta.vertices.size()) - 1;
  props.range = SiteSet(eta.vertices.front().d, eta.vertices);

  std::unordered_map<Point, std::vector<std::size_t>, PointHash> occ;
  for (std::size_t i = 0; i < eta.vertices.size(); ++i)
    occ[eta.vertices[i]].push_back(i);
  props.is_self_avoiding = occ.size() == eta.vertices.size();
  // circuit: eta(i) == eta(j) for i < j exactly when {i, j} = {0, L}
  if (props.length >= 1 && eta.vertices.front() == eta.vertices.back()) {
    bool ok = true;
    for (const auto& [p, idx] : occ) {
      if (idx.size() == 1) continue;
      if (!(idx.size() == 2 && idx[0] == 0 &&
            idx[1] == static_cast<std::size_t>(props.length)))
        ok = false;
    }
    props.is_circuit = ok;
  }
  return props;
}

}  // namespace harmlat
