#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ipm/grid.hpp"

namespace ipm {

/// Scalar field sampled on a Grid. Sample finiteness is checked by the
/// operations that need it (transforms, solvers), not on construction.
class RealField {
 public:
  explicit RealField(const Grid& grid) : grid_(grid), samples_(grid.size(), 0.0) {}
  RealField(const Grid& grid, std::vector<double> samples);

  static RealField from_function(const Grid& grid, const std::function<double(Point)>& f);
  static RealField constant(const Grid& grid, double value);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }
  std::vector<double>& data() noexcept { return samples_; }
  const std::vector<double>& data() const noexcept { return samples_; }

  double operator()(int i, int j) const noexcept { return samples_[grid_.index(i, j)]; }
  double& operator()(int i, int j) noexcept { return samples_[grid_.index(i, j)]; }
  double operator[](std::size_t k) const noexcept { return samples_[k]; }
  double& operator[](std::size_t k) noexcept { return samples_[k]; }

  double mean() const;
  double min() const;
  double max() const;
  double max_abs() const;
  /// Quadrature L2 norm, sqrt(sum f^2 * dx1 * dx2).
  double l2_norm() const;
  bool all_finite() const;

  RealField& operator+=(const RealField& other);
  RealField& operator-=(const RealField& other);
  RealField& operator*=(double c);
  friend RealField operator+(RealField a, const RealField& b) { return a += b; }
  friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
  friend RealField operator*(double c, RealField a) { return a *= c; }
  friend RealField operator-(RealField a) { return a *= -1.0; }

 private:
  Grid grid_;
  std::vector<double> samples_;
};

/// Half-spectrum coefficients of a real field (see Grid for the layout).
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid)
      : grid_(grid), coeffs_(grid.spectral_size(), std::complex<double>(0.0, 0.0)) {}
  SpectralField(const Grid& grid, std::vector<std::complex<double>> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
  std::span<std::complex<double>> coeffs() noexcept { return coeffs_; }
  std::vector<std::complex<double>>& data() noexcept { return coeffs_; }
  const std::vector<std::complex<double>>& data() const noexcept { return coeffs_; }

  std::complex<double> operator()(int i, int j) const noexcept {
    return coeffs_[static_cast<std::size_t>(i) * grid_.half_n2() + j];
  }
  std::complex<double>& operator()(int i, int j) noexcept {
    return coeffs_[static_cast<std::size_t>(i) * grid_.half_n2() + j];
  }

  /// Coefficient at signed wavenumber (k1, k2), using conjugate symmetry for
  /// k2 < 0.
  std::complex<double> at_wavenumber(int k1, int k2) const;

 private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

/// Pair of scalar fields on one grid.
class VectorField {
 public:
  explicit VectorField(const Grid& grid) : c1_(grid), c2_(grid) {}
  VectorField(RealField c1, RealField c2);

  const Grid& grid() const noexcept { return c1_.grid(); }
  const RealField& c1() const noexcept { return c1_; }
  const RealField& c2() const noexcept { return c2_; }
  RealField& c1() noexcept { return c1_; }
  RealField& c2() noexcept { return c2_; }
  const RealField& component(Axis a) const noexcept { return a == Axis::x1 ? c1_ : c2_; }

  Point at(std::size_t k) const noexcept { return {c1_[k], c2_[k]}; }
  /// max over samples of the Euclidean length.
  double max_norm() const;
  double l2_norm() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double c);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double c, VectorField a) { return a *= c; }

 private:
  RealField c1_;
  RealField c2_;
};

/// Throws ValidationError naming `what` unless the grids share a lattice.
void require_same_lattice(const Grid& a, const Grid& b, const char* what);

}  // namespace ipm
