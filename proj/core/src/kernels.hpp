#pragma once

// Spectral-state building blocks shared by the solvers. No validation.

#include "fft.hpp"
#include "ipm/field.hpp"

namespace ipm::detail {

/// Darcy velocity components in sample space from rho's spectrum.
void darcy_samples(const Grid& grid, const Spectrum& rho_hat, double* u1, double* u2);

/// Cubic B-spline coefficients of the Darcy velocity, from rho's spectrum.
void darcy_spline(const Grid& grid, const Spectrum& rho_hat, double* c1, double* c2);

/// Trigonometric interpolant of the Darcy velocity, evaluated at arbitrary
/// points. O(n1 n2) per point; Nyquist modes are dropped.
class DarcyEvaluator {
 public:
  DarcyEvaluator(const Grid& grid, const Spectrum& rho_hat);
  Point operator()(Point x) const;

 private:
  Grid grid_;
  Spectrum a_, b_;
};

/// Cubic B-spline coefficients of lattice samples.
void spline_prefilter(const Grid& grid, const double* samples, double* coeffs);

/// out = -FFT(u1 d1 rho + u2 d2 rho), dealiased when requested.
void transport_tendency(const Grid& grid, const Spectrum& rho_hat, const double* u1,
                        const double* u2, bool dealias, Spectrum& out);

/// Product w1 d1 f + w2 d2 f in spectral space (dealiased), f given by its spectrum.
void advection_spectrum(const Grid& grid, const Spectrum& f_hat, const double* w1,
                        const double* w2, Spectrum& out);

/// Minimum of det(I + dg) over the lattice, spectral derivatives.
double min_jacobian(const Grid& grid, const double* g1, const double* g2);

double sobolev_norm_spectrum(const Grid& grid, const Spectrum& c, double s);

}  // namespace ipm::detail
