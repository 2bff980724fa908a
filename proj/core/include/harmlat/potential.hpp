#pragma once
// Free-lattice potential tables: the recurrent potential kernel on Z^2 and
// the free Green's function on Z^3. Both are cached and shared read-only.

#include <unordered_map>

#include "harmlat/point.hpp"

namespace harmlat {

// a(x): a(0)=0, a((1,0))=1, discretely harmonic off the origin, and
// a(x) ~ (2/pi) ln|x| + (2*gamma + ln 8)/pi at infinity. Evaluated by a
// one-dimensional integral reduction with panel-adaptive Gauss quadrature;
// accurate to ~1e-13 absolute for coordinates up to 2^16.
class PotentialKernel2D {
 public:
  double a(const Point& x) const;
  double a(std::int64_t x1, std::int64_t x2) const;
  static const PotentialKernel2D& shared();

 private:
  mutable std::unordered_map<Point, double, PointHash> cache_;
};

// G(x) = expected visits to x of a simple random walk on Z^3 started at 0.
// Evaluated via the time integral of the heat kernel, which factorizes into
// scaled Bessel functions per coordinate; far tail added analytically.
// Accurate to ~1e-12 for coordinates up to a few hundred.
class FreeGreen3D {
 public:
  double g(const Point& x) const;
  double g(std::int64_t x1, std::int64_t x2, std::int64_t x3) const;
  double g0() const { return g(0, 0, 0); }
  static const FreeGreen3D& shared();

 private:
  void ensure_table(std::int64_t max_abs_coord) const;
  mutable std::unordered_map<Point, double, PointHash> cache_;
  mutable std::vector<double> nodes_, weights_;     // time quadrature
  mutable std::vector<std::vector<double>> bessel_; // bessel_[n][node]
  mutable std::int64_t table_max_ = -1;
  mutable double tail_t_ = 0;
};

}  // namespace harmlat
