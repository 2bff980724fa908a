#pragma once
// Builders for the example sets and gallery graphs: the tube, the square
// spiral, tetration sets, the discrete Klein bottle, the hairs graph and the
// tree tunnel chains, plus seeded random ensembles for property testing.

#include <cstdint>
#include <string>

#include "harmlat/chain.hpp"
#include "harmlat/siteset.hpp"

namespace harmlat {

// Two horizontal walls of a width-one corridor, open on the left, with the
// right mouth blocked by z and the marked vertex y one step inside it.
struct TubeSet {
  SiteSet set;
  Point y{0, 0};
  Point z{0, 0};
};
TubeSet tube_set(std::int64_t m);

// First n points of the canonical square-spiral arm around the origin
// (unit-width corridor, arm spacing 3). The point sequence is frozen; see
// kSpiralSequence for its full extent.
SiteSet spiral_set(std::size_t n);
std::size_t spiral_sequence_length();

// {(0,0)} u {(^k 2, 0) : 0 <= k <= n-2} with ^0 2 = 1 and ^{k+1} 2 = 2^(^k 2).
// cap_k bounds the largest tower index so coordinates stay within 2^16.
SiteSet tetration_set(int n, int cap_k = 4);

// Discrete Klein bottle K_n in d >= 3: the corner-free shell of the box
// [-n, n]^d punctured at three marked vertices, re-joined by an outer and an
// inner tube of wall sites, with the origin attached.
struct KleinParts {
  SiteSet shell;          // corner-free box shell
  SiteSet punctured;      // shell minus the closed neighborhoods of x1,x2,x3
  SiteSet tube_outer;     // wall of the outer broken line, outside the box
  SiteSet tube_inner;     // wall of the inner broken line, inside [-(n-1),n-1]^d
  SiteSet set;            // punctured u tube_outer u tube_inner u {0}
  Point x1{0, 0, 0}, x2{0, 0, 0}, x3{0, 0, 0};
  std::vector<Point> eta_outer;  // broken-line vertices, in order
  std::vector<Point> eta_inner;
};
KleinParts klein_bottle(std::int64_t n, int d = 3);

// A finite absorbing chain for a non-lattice gallery graph, with a marked
// start state and human-readable state labels.
struct GalleryChain {
  AbsorbingChain chain;
  std::size_t start_state = 0;
  std::vector<std::string> state_labels;  // transient states, by index
};

// The integer line with one pendant edge ("hair") per vertex, truncated at
// spine distance r and wired into a single boundary state; the three-point
// target {spine 0, spine -1, hair k} is absorbing. Start at the wired state.
GalleryChain hairs_chain(int k, int r);

// Birth-death chain on positions 1..n with q_i = (1/3)(q_{i-1} + q_{i+1}):
// from each interior position step left or right with probability 1/3 each
// and die otherwise; position 1 is the goal, position n is a dead end.
// Absorbing targets: "goal", "dead". Start state is position n-1.
GalleryChain tree_tunnel_chain(int n);

struct RandomSiteParams {
  int d = 2;
  std::size_t size = 1;
  std::int64_t window = 10;          // points drawn from [-window, window]^d
  bool star_connected = false;
  bool require_origin = true;
  bool require_origin_exposed = false;  // N^A_inf(0) nonempty
};
SiteSet random_site_set(const RandomSiteParams& params, std::uint64_t seed);

}  // namespace harmlat
