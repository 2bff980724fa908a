#pragma once
// Adjacency, *-adjacency, clusters, complement decomposition, boundary and
// neighborhood operators, and lattice paths.

#include <optional>
#include <unordered_set>

#include "harmlat/siteset.hpp"

namespace harmlat {

enum class Adjacency { plain, star };

// The 2d plain neighbors, ordered axis0+, axis0-, axis1+, axis1-, ...
std::vector<Point> neighbors(const Point& p);
// The 3^d-1 star neighbors. For d=2 the order is the fixed clockwise cycle
// starting at (0,1): (0,1),(1,1),(1,0),(1,-1),(0,-1),(-1,-1),(-1,0),(-1,1).
// Higher d uses a fixed lexicographic offset order.
std::vector<Point> star_neighbors(const Point& p);
std::vector<Point> adjacent(const Point& p, Adjacency adj);

// Connected components under the chosen adjacency, ordered by
// lexicographically smallest member. Empty input gives an empty partition.
std::vector<SiteSet> clusters(const SiteSet& s, Adjacency adj);
bool is_connected(const SiteSet& s, Adjacency adj);  // empty set counts as connected

// Membership classification of the complement of A: the unique infinite
// cluster of A^c, and the cluster of A^c u {0} containing the origin.
class ComplementDecomposition {
 public:
  // margin >= 2 beyond the bbox; the complement outside bbox+1 is one
  // connected region, so flood marks from the window shell are exhaustive.
  explicit ComplementDecomposition(const SiteSet& a, std::int64_t margin = 2);

  const Box& window() const { return window_; }
  bool zero_reaches_infinity() const { return zero_reaches_infinity_; }
  // True iff p lies in the infinite complement cluster of A.
  bool in_infinite(const Point& p) const;
  // True iff p lies in the cluster of A^c u {0} containing the origin.
  // Contains 0 itself even when 0 is in A.
  bool in_zero(const Point& p) const;

 private:
  const SiteSet* a_;
  Box window_;
  bool zero_reaches_infinity_ = false;
  std::unordered_set<Point, PointHash> infinite_, zero_;
};

enum class BoundaryKind { outer, inner, outer_ext, inner_ext, outer_zero, inner_zero };

SiteSet boundary(const SiteSet& a, BoundaryKind kind, Adjacency adj = Adjacency::plain);
// Same, reusing a precomputed decomposition of A.
SiteSet boundary(const SiteSet& a, BoundaryKind kind, Adjacency adj,
                 const ComplementDecomposition& dec);

enum class NeighborhoodVariant { all, infinite, zero };

// N^A(y) = N(y) n A^c, optionally restricted to the infinite or zero
// complement cluster. Throws if y is not in A.
SiteSet outside_neighborhood(const SiteSet& a, const Point& y,
                             NeighborhoodVariant variant,
                             Adjacency adj = Adjacency::plain);
SiteSet outside_neighborhood(const SiteSet& a, const Point& y,
                             NeighborhoodVariant variant, Adjacency adj,
                             const ComplementDecomposition& dec);

struct Path {
  std::vector<Point> vertices;
  Adjacency kind = Adjacency::plain;
};

struct PathProperties {
  bool is_self_avoiding = false;
  // Endpoints equal and no other coincidences; ((0,0),(1,0),(0,0)) qualifies.
  bool is_circuit = false;
  std::int64_t length = 0;  // vertex count - 1
  SiteSet range;
};

// Throws on a malformed step (consecutive distance != 1 in the path's norm).
PathProperties path_ops(const Path& eta);

}  // namespace harmlat
