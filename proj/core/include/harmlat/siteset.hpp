#pragma once
// A finite, deduplicated, lexicographically ordered set of lattice points
// with an index map and a tight bounding box.

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "harmlat/point.hpp"

namespace harmlat {

class SiteSet {
 public:
  SiteSet() = default;
  explicit SiteSet(int dim) : d_(dim) {
    if (dim < 2 || dim > 4) throw std::invalid_argument("dimension must be 2, 3 or 4");
  }
  SiteSet(int dim, std::vector<Point> pts) : SiteSet(dim) {
    for (auto& p : pts) {
      if (p.d != dim) throw std::invalid_argument("mixed dimensions in site set");
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    points_ = std::move(pts);
    rebuild();
  }

  int dim() const { return d_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Point>& points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  bool contains(const Point& p) const { return index_.count(p) > 0; }
  // Ordinal of p in lexicographic order; throws if absent.
  std::size_t index_of(const Point& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) throw std::out_of_range("point not in set: " + p.str());
    return it->second;
  }
  const Box& bbox() const {
    if (empty()) throw std::logic_error("bbox of empty set");
    return bbox_;
  }

  SiteSet without(const Point& p) const {
    std::vector<Point> pts;
    pts.reserve(points_.size());
    for (const auto& q : points_)
      if (q != p) pts.push_back(q);
    return SiteSet(d_, std::move(pts));
  }
  SiteSet with(const Point& p) const {
    auto pts = points_;
    pts.push_back(p);
    return SiteSet(d_, std::move(pts));
  }
  SiteSet unite(const SiteSet& o) const {
    auto pts = points_;
    pts.insert(pts.end(), o.points_.begin(), o.points_.end());
    return SiteSet(d_, std::move(pts));
  }
  SiteSet subtract(const SiteSet& o) const {
    std::vector<Point> pts;
    for (const auto& q : points_)
      if (!o.contains(q)) pts.push_back(q);
    return SiteSet(d_, std::move(pts));
  }
  SiteSet intersect(const SiteSet& o) const {
    std::vector<Point> pts;
    for (const auto& q : points_)
      if (o.contains(q)) pts.push_back(q);
    return SiteSet(d_, std::move(pts));
  }

  bool operator==(const SiteSet& o) const {
    return d_ == o.d_ && points_ == o.points_;
  }

 private:
  void rebuild() {
    index_.clear();
    index_.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) index_[points_[i]] = i;
    if (!points_.empty()) {
      bbox_.d = d_;
      for (int a = 0; a < d_; ++a) {
        std::int64_t lo = points_[0].c[a], hi = points_[0].c[a];
        for (const auto& p : points_) {
          lo = std::min(lo, p.c[a]);
          hi = std::max(hi, p.c[a]);
        }
        bbox_.lo[a] = lo;
        bbox_.hi[a] = hi;
      }
    }
  }

  int d_ = 2;
  std::vector<Point> points_;
  std::unordered_map<Point, std::size_t, PointHash> index_;
  Box bbox_;
};

// JSON form {"d": int, "points": [[x,y(,z)], ...]}; writer emits canonical
// lexicographic order, reader accepts any order and rejects duplicates.
std::string siteset_to_json(const SiteSet& s);
SiteSet siteset_from_json(const std::string& text);

}  // namespace harmlat
