#pragma once
// Combinatorial removal predicates and the d=2 vertex-selection strategy.

#include <optional>

#include "harmlat/lattice.hpp"

namespace harmlat {

enum class RemovalCase { dead, c1a, c1b, c2, c3 };
enum class RemovalType { trivial, i, ii, iii };

struct RemovalDecision {
  Point z_dagger;
  RemovalCase case_label;
  RemovalType type_tag;
  std::optional<Point> witness;          // predecessor on the clockwise walk, type (i)
  std::optional<std::size_t> cluster_id; // cluster searched in cases 1b / 2
};

const char* to_string(RemovalCase c);
const char* to_string(RemovalType t);

// True iff every pair of exterior neighbors of z (those in the infinite
// complement cluster) is joined by a plain path inside the exterior
// *-neighborhood of z; vacuous when z has at most one exterior neighbor.
// check_connected enforces that A is *-connected (skipped for ambient scans).
bool is_marginal_vertex(const SiteSet& a, const Point& z, bool check_connected = true);
bool is_marginal_vertex(const SiteSet& a, const Point& z,
                        const ComplementDecomposition& dec, bool check_connected = true);

// True iff deleting z disconnects A under *-adjacency; singletons give false.
bool is_star_cut_vertex(const SiteSet& a, const Point& z, bool check_connected = true);

// A vertex whose removal keeps A *-connected; prefers a *-graph diameter
// endpoint, avoids `forbidden` when an alternative exists, lexicographic
// tie-breaks throughout.
Point non_cut_vertex(const SiteSet& a, std::optional<Point> forbidden = std::nullopt);

// The d=2 selection rule. Requires 0 in A, |A| >= 2, and the origin exposed
// to the infinite complement cluster.
RemovalDecision select_removal_vertex(const SiteSet& a);

}  // namespace harmlat
