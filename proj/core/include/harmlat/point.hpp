#pragma once
// Integer lattice points in Z^d, d in {2,3,4}, plus axis-aligned boxes.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace harmlat {

struct Point {
  std::array<std::int64_t, 4> c{0, 0, 0, 0};
  int d = 2;

  Point() = default;
  Point(std::int64_t x, std::int64_t y) : c{x, y, 0, 0}, d(2) {}
  Point(std::int64_t x, std::int64_t y, std::int64_t z) : c{x, y, z, 0}, d(3) {}
  Point(std::int64_t x, std::int64_t y, std::int64_t z, std::int64_t w)
      : c{x, y, z, w}, d(4) {}
  explicit Point(const std::vector<std::int64_t>& v) {
    if (v.size() < 2 || v.size() > 4)
      throw std::invalid_argument("point dimension must be 2, 3 or 4");
    d = static_cast<int>(v.size());
    for (int i = 0; i < d; ++i) c[i] = v[i];
  }

  static Point origin(int dim) {
    Point p;
    if (dim < 2 || dim > 4) throw std::invalid_argument("dimension must be 2, 3 or 4");
    p.d = dim;
    return p;
  }

  std::int64_t operator[](int i) const { return c[i]; }
  std::int64_t& operator[](int i) { return c[i]; }

  bool operator==(const Point& o) const {
    if (d != o.d) return false;
    for (int i = 0; i < d; ++i)
      if (c[i] != o.c[i]) return false;
    return true;
  }
  bool operator!=(const Point& o) const { return !(*this == o); }
  // Lexicographic by coordinates; the ordering used for every deterministic
  // tie-break in the library.
  bool operator<(const Point& o) const {
    for (int i = 0; i < d; ++i)
      if (c[i] != o.c[i]) return c[i] < o.c[i];
    return false;
  }

  Point operator+(const Point& o) const {
    Point r = *this;
    for (int i = 0; i < d; ++i) r.c[i] += o.c[i];
    return r;
  }
  Point operator-(const Point& o) const {
    Point r = *this;
    for (int i = 0; i < d; ++i) r.c[i] -= o.c[i];
    return r;
  }

  std::int64_t l1(const Point& o) const {
    std::int64_t s = 0;
    for (int i = 0; i < d; ++i) s += std::llabs(c[i] - o.c[i]);
    return s;
  }
  std::int64_t linf(const Point& o) const {
    std::int64_t m = 0;
    for (int i = 0; i < d; ++i) {
      std::int64_t a = std::llabs(c[i] - o.c[i]);
      if (a > m) m = a;
    }
    return m;
  }
  std::int64_t norm_l1() const { return l1(origin(d)); }
  std::int64_t norm_linf() const { return linf(origin(d)); }
  double norm_l2() const {
    double s = 0;
    for (int i = 0; i < d; ++i) s += double(c[i]) * double(c[i]);
    return std::sqrt(s);
  }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < d; ++i) {
      if (i) s += ",";
      s += std::to_string(c[i]);
    }
    return s + ")";
  }
};

struct PointHash {
  std::size_t operator()(const Point& p) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ std::uint64_t(p.d);
    for (int i = 0; i < p.d; ++i) {
      std::uint64_t x = std::uint64_t(p.c[i]) + 0x9e3779b97f4a7c15ULL;
      x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
      x ^= x >> 27; x *= 0x94d049bb133111ebULL;
      x ^= x >> 31;
      h = (h ^ x) * 0xff51afd7ed558ccdULL;
    }
    return std::size_t(h);
  }
};

// Closed axis-aligned box [lo_i, hi_i] per axis.
struct Box {
  std::array<std::int64_t, 4> lo{0, 0, 0, 0};
  std::array<std::int64_t, 4> hi{0, 0, 0, 0};
  int d = 2;

  bool contains(const Point& p) const {
    for (int i = 0; i < d; ++i)
      if (p.c[i] < lo[i] || p.c[i] > hi[i]) return false;
    return true;
  }
  Box expanded(std::int64_t margin) const {
    Box b = *this;
    for (int i = 0; i < d; ++i) {
      b.lo[i] -= margin;
      b.hi[i] += margin;
    }
    return b;
  }
  bool on_boundary(const Point& p) const {
    if (!contains(p)) return false;
    for (int i = 0; i < d; ++i)
      if (p.c[i] == lo[i] || p.c[i] == hi[i]) return true;
    return false;
  }
  // L-infinity radius from the origin covering the whole box.
  std::int64_t linf_radius() const {
    std::int64_t m = 0;
    for (int i = 0; i < d; ++i) {
      m = std::max<std::int64_t>(m, std::llabs(lo[i]));
      m = std::max<std::int64_t>(m, std::llabs(hi[i]));
    }
    return m;
  }
};

}  // namespace harmlat
