#include "ipm/interpolation.hpp"

#include <cmath>

#include "kernels.hpp"

namespace ipm {
namespace {

// Cubic B-spline weights on nodes -1, 0, 1, 2 at offset t in [0, 1).
std::array<double, 4> bspline_weights(double t) {
  const double s = 1.0 - t;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {s * s * s / 6.0, (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
          (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0, t3 / 6.0};
}

int wrap_index(long i, int n) {
  long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

}  // namespace

RealField spline_coefficients(const RealField& samples) {
  RealField c(samples.grid());
  detail::spline_prefilter(samples.grid(), samples.data().data(), c.data().data());
  return c;
}

StencilWeights cubic_stencil(const Grid& grid, Point p) {
  const double u = p.x1 / grid.dx1();
  const double v = p.x2 / grid.dx2();
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const long i0 = static_cast<long>(fu);
  const long j0 = static_cast<long>(fv);
  StencilWeights s;
  s.w1 = bspline_weights(u - fu);
  s.w2 = bspline_weights(v - fv);
  for (int a = 0; a < 4; ++a) {
    s.i[a] = wrap_index(i0 - 1 + a, grid.n1());
    s.j[a] = wrap_index(j0 - 1 + a, grid.n2());
  }
  return s;
}

CubicInterpolator::CubicInterpolator(const RealField& samples)
    : c_(spline_coefficients(samples)) {}

CubicInterpolator CubicInterpolator::from_coefficients(RealField coefficients) {
  return CubicInterpolator(std::move(coefficients), Raw{});
}

double CubicInterpolator::operator()(Point p) const {
  const Grid& g = c_.grid();
  const StencilWeights s = cubic_stencil(g, p);
  const double* data = c_.data().data();
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    const double* row = data + static_cast<std::size_t>(s.i[a]) * g.n2();
    double r = 0.0;
    for (int b = 0; b < 4; ++b) r += s.w2[b] * row[s.j[b]];
    sum += s.w1[a] * r;
  }
  return sum;
}

PairInterpolator::PairInterpolator(const RealField& a, const RealField& b)
    : a_(spline_coefficients(a)), b_(spline_coefficients(b)) {
  require_same_lattice(a.grid(), b.grid(), "PairInterpolator");
}

PairInterpolator PairInterpolator::from_coefficients(RealField a, RealField b) {
  require_same_lattice(a.grid(), b.grid(), "PairInterpolator");
  return PairInterpolator(std::move(a), std::move(b), Raw{});
}

Point PairInterpolator::operator()(Point p) const {
  const Grid& g = a_.grid();
  const StencilWeights s = cubic_stencil(g, p);
  const double* da = a_.data().data();
  const double* db = b_.data().data();
  double sa = 0.0;
  double sb = 0.0;
  for (int a = 0; a < 4; ++a) {
    const std::size_t row = static_cast<std::size_t>(s.i[a]) * g.n2();
    double ra = 0.0;
    double rb = 0.0;
    for (int b = 0; b < 4; ++b) {
      ra += s.w2[b] * da[row + s.j[b]];
      rb += s.w2[b] * db[row + s.j[b]];
    }
    sa += s.w1[a] * ra;
    sb += s.w1[a] * rb;
  }
  return {sa, sb};
}

}  // namespace ipm
