#include "ipm/operators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ipm/error.hpp"
#include "ipm/lagrangian.hpp"
#include "ipm/spectral.hpp"
#include "ipm/transport.hpp"
#include "kernels.hpp"

namespace ipm {
namespace detail {

void darcy_samples(const Grid& grid, const Spectrum& rho_hat, double* u1, double* u2) {
  const auto& t = tables(grid);
  thread_local Spectrum a;
  thread_local Spectrum b;
  a.resize(rho_hat.size());
  b.resize(rho_hat.size());
  for (std::size_t k = 0; k < rho_hat.size(); ++k) {
    const double q = t.inv_xi_sq[k];
    a[k] = (t.xi1_odd[k] * t.xi2_odd[k] * q) * rho_hat[k];
    b[k] = (-t.xi1[k] * t.xi1[k] * q) * rho_hat[k];
  }
  inverse(grid, a.data(), u1);
  inverse(grid, b.data(), u2);
}

void darcy_spline(const Grid& grid, const Spectrum& rho_hat, double* c1, double* c2) {
  const auto& t = tables(grid);
  thread_local Spectrum a;
  thread_local Spectrum b;
  a.resize(rho_hat.size());
  b.resize(rho_hat.size());
  for (std::size_t k = 0; k < rho_hat.size(); ++k) {
    const double q = t.inv_xi_sq[k] * t.inv_spline[k];
    a[k] = (t.xi1_odd[k] * t.xi2_odd[k] * q) * rho_hat[k];
    b[k] = (-t.xi1[k] * t.xi1[k] * q) * rho_hat[k];
  }
  inverse(grid, a.data(), c1);
  inverse(grid, b.data(), c2);
}

DarcyEvaluator::DarcyEvaluator(const Grid& grid, const Spectrum& rho_hat)
    : grid_(grid), a_(rho_hat.size()), b_(rho_hat.size()) {
  const auto& t = tables(grid);
  const int half = grid.half_n2();
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (int i = 0; i < grid.n1(); ++i) {
    for (int j = 0; j < half; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * half + j;
      if (2 * i == grid.n1() || 2 * j == grid.n2()) continue;
      const double q = t.inv_xi_sq[k] * t.multiplicity[k] * scale;
      a_[k] = (t.xi1[k] * t.xi2[k] * q) * rho_hat[k];
      b_[k] = (-t.xi1[k] * t.xi1[k] * q) * rho_hat[k];
    }
  }
}

Point DarcyEvaluator::operator()(Point x) const {
  const int n1 = grid_.n1();
  const int half = grid_.half_n2();
  const double w = 2.0 * std::numbers::pi / grid_.box_length();
  thread_local std::vector<std::complex<double>> e2;
  e2.resize(half);
  for (int j = 0; j < half; ++j) e2[j] = std::polar(1.0, w * j * x.x2);
  std::complex<double> s1 = 0.0;
  std::complex<double> s2 = 0.0;
  for (int i = 0; i < n1; ++i) {
    const int k1 = 2 * i <= n1 ? i : i - n1;
    const std::complex<double>* a = a_.data() + static_cast<std::size_t>(i) * half;
    const std::complex<double>* b = b_.data() + static_cast<std::size_t>(i) * half;
    std::complex<double> ra = 0.0;
    std::complex<double> rb = 0.0;
    for (int j = 0; j < half; ++j) {
      ra += a[j] * e2[j];
      rb += b[j] * e2[j];
    }
    const std::complex<double> e1 = std::polar(1.0, w * k1 * x.x1);
    s1 += e1 * ra;
    s2 += e1 * rb;
  }
  return {s1.real(), s2.real()};
}

void spline_prefilter(const Grid& grid, const double* samples, double* coeffs) {
  const auto& t = tables(grid);
  thread_local Spectrum a;
  a.resize(grid.spectral_size());
  forward(grid, samples, a.data());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= t.inv_spline[k];
  inverse(grid, a.data(), coeffs);
}

double min_jacobian(const Grid& grid, const double* g1, const double* g2) {
  const auto& t = tables(grid);
  const std::size_t n = grid.size();
  thread_local Spectrum a, b, d;
  thread_local std::vector<double> j11, j12, j21, j22;
  a.resize(grid.spectral_size());
  b.resize(grid.spectral_size());
  d.resize(grid.spectral_size());
  for (auto* v : {&j11, &j12, &j21, &j22}) v->resize(n);
  forward(grid, g1, a.data());
  forward(grid, g2, b.data());
  const std::complex<double> I(0.0, 1.0);
  auto diff = [&](const Spectrum& src, const std::vector<double>& xi, std::vector<double>& out) {
    for (std::size_t k = 0; k < src.size(); ++k) d[k] = I * xi[k] * src[k];
    inverse(grid, d.data(), out.data());
  };
  diff(a, t.xi1_odd, j11);
  diff(a, t.xi2_odd, j12);
  diff(b, t.xi1_odd, j21);
  diff(b, t.xi2_odd, j22);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double det = (1.0 + j11[k]) * (1.0 + j22[k]) - j12[k] * j21[k];
    if (!(det >= m)) m = det;  // NaN propagates
  }
  return m;
}

void advection_spectrum(const Grid& grid, const Spectrum& f_hat, const double* w1,
                        const double* w2, Spectrum& out) {
  const auto& t = tables(grid);
  const std::size_t n = grid.size();
  thread_local Spectrum d;
  thread_local std::vector<double> d1;
  thread_local std::vector<double> d2;
  d.resize(f_hat.size());
  d1.resize(n);
  d2.resize(n);
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t k = 0; k < f_hat.size(); ++k) d[k] = I * t.xi1_odd[k] * f_hat[k];
  inverse(grid, d.data(), d1.data());
  for (std::size_t k = 0; k < f_hat.size(); ++k) d[k] = I * t.xi2_odd[k] * f_hat[k];
  inverse(grid, d.data(), d2.data());
  for (std::size_t k = 0; k < n; ++k) d1[k] = w1[k] * d1[k] + w2[k] * d2[k];
  out.resize(f_hat.size());
  forward(grid, d1.data(), out.data());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (!t.keep[k]) out[k] = 0.0;
  }
}

void transport_tendency(const Grid& grid, const Spectrum& rho_hat, const double* u1,
                        const double* u2, bool dealias, Spectrum& out) {
  if (dealias) {
    advection_spectrum(grid, rho_hat, u1, u2, out);
  } else {
    const auto& t = tables(grid);
    const std::size_t n = grid.size();
    thread_local Spectrum d;
    thread_local std::vector<double> d1;
    thread_local std::vector<double> d2;
    d.resize(rho_hat.size());
    d1.resize(n);
    d2.resize(n);
    const std::complex<double> I(0.0, 1.0);
    for (std::size_t k = 0; k < rho_hat.size(); ++k) d[k] = I * t.xi1_odd[k] * rho_hat[k];
    inverse(grid, d.data(), d1.data());
    for (std::size_t k = 0; k < rho_hat.size(); ++k) d[k] = I * t.xi2_odd[k] * rho_hat[k];
    inverse(grid, d.data(), d2.data());
    for (std::size_t k = 0; k < n; ++k) d1[k] = u1[k] * d1[k] + u2[k] * d2[k];
    out.resize(rho_hat.size());
    forward(grid, d1.data(), out.data());
  }
  for (auto& c : out) c = -c;
}

double sobolev_norm_spectrum(const Grid& grid, const Spectrum& c, double s) {
  return sobolev_norm(SpectralField(grid, c), s);
}

}  // namespace detail

void require_mean_zero(const RealField& rho, const char* what) {
  const double mean_part = std::abs(rho.mean()) * rho.grid().box_length();
  if (mean_part > 1e-12 * rho.l2_norm()) {
    throw ValidationError(std::string(what) + ": density must be mean-zero (mean " +
                          std::to_string(rho.mean()) + ")");
  }
}

VectorField darcy_velocity(const RealField& rho) {
  require_mean_zero(rho, "darcy_velocity");
  const SpectralField F = forward_transform(rho);
  VectorField u(rho.grid());
  detail::darcy_samples(rho.grid(), F.data(), u.c1().data().data(), u.c2().data().data());
  return u;
}

RealField pressure(const RealField& rho) {
  require_mean_zero(rho, "pressure");
  return inverse_laplacian(derivative(rho, Axis::x2));
}

VectorField darcy_from_pressure(const RealField& rho) {
  const RealField p = pressure(rho);
  RealField u1 = -derivative(p, Axis::x1);
  RealField u2 = -derivative(p, Axis::x2) - rho;
  return VectorField(std::move(u1), std::move(u2));
}

RealField divergence(const VectorField& w) {
  return derivative(w.c1(), Axis::x1) + derivative(w.c2(), Axis::x2);
}

RealField advect(const VectorField& w, const RealField& f) {
  require_same_lattice(w.grid(), f.grid(), "advect");
  const SpectralField F = forward_transform(f);
  detail::Spectrum out;
  detail::advection_spectrum(f.grid(), F.data(), w.c1().data().data(), w.c2().data().data(),
                             out);
  RealField r(f.grid());
  detail::inverse(f.grid(), out.data(), r.data().data());
  return r;
}

RealField riesz_pair(const RealField& f, Axis j, Axis k) {
  SpectralField F = forward_transform(f);
  const auto& t = detail::tables(f.grid());
  auto& c = F.data();
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double a = j == Axis::x1 ? t.xi1_odd[m] : t.xi2_odd[m];
    const double b = k == Axis::x1 ? t.xi1_odd[m] : t.xi2_odd[m];
    // Even symbol when j == k: keep the Nyquist frequency.
    const double sym = (j == k) ? -(j == Axis::x1 ? t.xi1[m] * t.xi1[m] : t.xi2[m] * t.xi2[m])
                                : -a * b;
    c[m] *= sym * t.inv_xi_sq[m];
  }
  RealField out(f.grid());
  detail::inverse(f.grid(), c.data(), out.data().data());
  return out;
}

RealField commutator(const VectorField& w, Axis j, Axis k, const RealField& f) {
  require_same_lattice(w.grid(), f.grid(), "commutator");
  return advect(w, riesz_pair(f, j, k)) - riesz_pair(advect(w, f), j, k);
}

VectorField commutator_pair(const VectorField& w, const RealField& rho) {
  RealField f1 = -commutator(w, Axis::x1, Axis::x2, rho);
  RealField f2 = commutator(w, Axis::x1, Axis::x1, rho);
  return VectorField(std::move(f1), std::move(f2));
}

VectorField rhs_F(const FlowMap& phi, const VectorField& v, const RealField& rho0) {
  require_same_lattice(phi.grid(), v.grid(), "rhs_F");
  require_same_lattice(phi.grid(), rho0.grid(), "rhs_F");
  const FlowMap inverse = invert_flow_map(phi);
  const VectorField w = compose(v, inverse);
  const RealField rho = compose(rho0, inverse);
  return compose(commutator_pair(w, rho), phi);
}

VectorField linearized_psi(const RealField& base, const RealField& direction, double eps,
                           const SolverConfig& cfg) {
  if (!(eps > 0.0)) throw ValidationError("linearized_psi: eps must be positive");
  require_same_lattice(base.grid(), direction.grid(), "linearized_psi");
  const FlowMap plus = psi_map(base + eps * direction, cfg);
  const FlowMap minus = psi_map(base - eps * direction, cfg);
  return (0.5 / eps) * (plus.displacement() - minus.displacement());
}

LinearizedPsi linearized_psi_richardson(const RealField& base, const RealField& direction,
                                        double eps, const SolverConfig& cfg) {
  if (!(eps > 0.0)) {
    const double n = sobolev_norm(direction, base.grid().s());
    if (n == 0.0) {
      VectorField zero(base.grid());
      return {zero, zero, zero, 0.0};
    }
    eps = 1e-3 / n;
  }
  VectorField coarse = linearized_psi(base, direction, eps, cfg);
  VectorField fine = linearized_psi(base, direction, 0.5 * eps, cfg);
  VectorField extrapolated = (4.0 / 3.0) * fine - (1.0 / 3.0) * coarse;
  return {std::move(coarse), std::move(fine), std::move(extrapolated), eps};
}

}  // namespace ipm
