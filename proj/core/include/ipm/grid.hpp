#pragma once

#include <cmath>
#include <cstddef>

namespace ipm {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point operator-(Point a, Point b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point operator*(double c, Point a) { return {c * a.x1, c * a.x2}; }
  friend bool operator==(Point, Point) = default;
};

inline double norm(Point p) { return std::hypot(p.x1, p.x2); }

enum class Axis : int { x1 = 1, x2 = 2 };

/// Periodic sampling lattice on the box [0, L)^2 together with its
/// Fourier dual. Samples are stored row-major with x2 as the fast index.
///
/// Dual frequencies are xi = (2 pi / L) k with integer k in [-n/2, n/2).
/// Spectral data uses the real-to-complex half layout: n1 rows by
/// n2/2 + 1 columns, column j holding k2 = j.
class Grid {
 public:
  /// Throws ValidationError unless n1, n2 >= 8 are even, box_length > 0
  /// and s > 2.
  Grid(int n1, int n2, double box_length, double s);

  static Grid square(int n, double box_length = 32.0, double s = 2.5) {
    return Grid(n, n, box_length, s);
  }

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  double box_length() const noexcept { return box_; }
  double s() const noexcept { return s_; }

  std::size_t size() const noexcept { return static_cast<std::size_t>(n1_) * n2_; }
  int half_n2() const noexcept { return n2_ / 2 + 1; }
  std::size_t spectral_size() const noexcept {
    return static_cast<std::size_t>(n1_) * half_n2();
  }

  double dx1() const noexcept { return box_ / n1_; }
  double dx2() const noexcept { return box_ / n2_; }
  double cell_area() const noexcept { return dx1() * dx2(); }

  double x1(int i) const noexcept { return i * dx1(); }
  double x2(int j) const noexcept { return j * dx2(); }
  Point node(int i, int j) const noexcept { return {x1(i), x2(j)}; }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * n2_ + j;
  }

  /// Signed wavenumber of spectral row i, in [-n1/2, n1/2).
  int k1(int i) const noexcept { return i < n1_ / 2 ? i : i - n1_; }
  /// Wavenumber of spectral column j; the Nyquist column is reported as -n2/2.
  int k2(int j) const noexcept { return j < n2_ / 2 ? j : -n2_ / 2; }
  double wavenumber_scale() const noexcept { return 2.0 * M_PI / box_; }
  Point center() const noexcept { return {0.5 * box_, 0.5 * box_}; }

  /// Same lattice with a different Sobolev exponent.
  Grid with_s(double s) const { return Grid(n1_, n2_, box_, s); }

  /// Lattice identity; the Sobolev exponent does not take part.
  bool same_lattice(const Grid& other) const noexcept {
    return n1_ == other.n1_ && n2_ == other.n2_ && box_ == other.box_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n1_;
  int n2_;
  double box_;
  double s_;
};

/// Wraps a coordinate into [0, L).
double wrap_coordinate(double x, double box_length);

/// Minimal-image difference a - b on the periodic box.
Point periodic_difference(Point a, Point b, double box_length);

inline double periodic_distance(Point a, Point b, double box_length) {
  return norm(periodic_difference(a, b, box_length));
}

}  // namespace ipm
