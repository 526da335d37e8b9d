#pragma once

#include <array>

#include "ipm/field.hpp"

namespace ipm {

/// Periodic bicubic B-spline interpolant. The spline coefficients come from a
/// spectral prefilter, so the interpolant reproduces the samples, is C2 and
/// fourth order accurate.
class CubicInterpolator {
 public:
  explicit CubicInterpolator(const RealField& samples);
  static CubicInterpolator from_coefficients(RealField coefficients);

  double operator()(Point p) const;
  const RealField& coefficients() const noexcept { return c_; }

 private:
  struct Raw {};
  CubicInterpolator(RealField coefficients, Raw) : c_(std::move(coefficients)) {}
  RealField c_;
};

/// Two interpolants sharing one stencil evaluation.
class PairInterpolator {
 public:
  PairInterpolator(const RealField& a, const RealField& b);
  static PairInterpolator from_coefficients(RealField a, RealField b);

  Point operator()(Point p) const;
  const Grid& grid() const noexcept { return a_.grid(); }

 private:
  struct Raw {};
  PairInterpolator(RealField a, RealField b, Raw) : a_(std::move(a)), b_(std::move(b)) {}
  RealField a_;
  RealField b_;
};

/// Spline coefficients of lattice samples.
RealField spline_coefficients(const RealField& samples);

struct StencilWeights {
  std::array<int, 4> i;
  std::array<int, 4> j;
  std::array<double, 4> w1;
  std::array<double, 4> w2;
};

/// Wrapped node indices and B-spline weights for the 4x4 stencil around p.
StencilWeights cubic_stencil(const Grid& grid, Point p);

}  // namespace ipm
