#include "ipm/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ipm/error.hpp"

namespace ipm {

void require_same_lattice(const Grid& a, const Grid& b, const char* what) {
  if (!a.same_lattice(b)) {
    throw ValidationError(std::string(what) + ": grid mismatch (" + std::to_string(a.n1()) +
                          "x" + std::to_string(a.n2()) + " vs " + std::to_string(b.n1()) +
                          "x" + std::to_string(b.n2()) + ")");
  }
}

RealField::RealField(const Grid& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size()) {
    throw ValidationError("RealField: sample count " + std::to_string(samples_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
  }
}

RealField RealField::from_function(const Grid& grid, const std::function<double(Point)>& f) {
  RealField out(grid);
  for (int i = 0; i < grid.n1(); ++i) {
    for (int j = 0; j < grid.n2(); ++j) out(i, j) = f(grid.node(i, j));
  }
  return out;
}

RealField RealField::constant(const Grid& grid, double value) {
  return RealField(grid, std::vector<double>(grid.size(), value));
}

double RealField::mean() const {
  double sum = 0.0;
  for (double v : samples_) sum += v;
  return sum / static_cast<double>(samples_.size());
}

double RealField::min() const { return *std::min_element(samples_.begin(), samples_.end()); }
double RealField::max() const { return *std::max_element(samples_.begin(), samples_.end()); }

double RealField::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

double RealField::l2_norm() const {
  double sum = 0.0;
  for (double v : samples_) sum += v * v;
  return std::sqrt(sum * grid_.cell_area());
}

bool RealField::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

RealField& RealField::operator+=(const RealField& other) {
  require_same_lattice(grid_, other.grid_, "RealField +=");
  for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] += other.samples_[k];
  return *this;
}

RealField& RealField::operator-=(const RealField& other) {
  require_same_lattice(grid_, other.grid_, "RealField -=");
  for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] -= other.samples_[k];
  return *this;
}

RealField& RealField::operator*=(double c) {
  for (double& v : samples_) v *= c;
  return *this;
}

SpectralField::SpectralField(const Grid& grid, std::vector<std::complex<double>> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.spectral_size()) {
    throw ValidationError("SpectralField: coefficient count does not match grid");
  }
}

std::complex<double> SpectralField::at_wavenumber(int k1, int k2) const {
  const int n1 = grid_.n1();
  const int n2 = grid_.n2();
  auto row = [n1](int k) { return ((k % n1) + n1) % n1; };
  int c = ((k2 % n2) + n2) % n2;
  if (c <= n2 / 2) return (*this)(row(k1), c);
  return std::conj((*this)(row(-k1), n2 - c));
}

VectorField::VectorField(RealField c1, RealField c2) : c1_(std::move(c1)), c2_(std::move(c2)) {
  require_same_lattice(c1_.grid(), c2_.grid(), "VectorField");
}

double VectorField::max_norm() const {
  double m = 0.0;
  for (std::size_t k = 0; k < c1_.data().size(); ++k) {
    m = std::max(m, std::hypot(c1_[k], c2_[k]));
  }
  return m;
}

double VectorField::l2_norm() const { return std::hypot(c1_.l2_norm(), c2_.l2_norm()); }

VectorField& VectorField::operator+=(const VectorField& o) {
  c1_ += o.c1_;
  c2_ += o.c2_;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  c1_ -= o.c1_;
  c2_ -= o.c2_;
  return *this;
}

VectorField& VectorField::operator*=(double c) {
  c1_ *= c;
  c2_ *= c;
  return *this;
}

}  // namespace ipm
