#pragma once

#include <complex>
#include <functional>

#include "ipm/field.hpp"

namespace ipm {

// Normalization: the forward transform is unscaled,
//   F(k) = sum_x f(x) exp(-i xi(k) . x),
// and the inverse carries the factor 1 / (n1 n2).

/// Throws ValidationError if any sample is non-finite.
SpectralField forward_transform(const RealField& f);

/// Throws ValidationError if the coefficients violate conjugate symmetry on
/// the self-paired columns by more than 1e-10 of the largest coefficient.
RealField inverse_transform(const SpectralField& F);

/// Largest conjugate-symmetry violation, relative to max |F|.
double hermitian_defect(const SpectralField& F);

/// Frequency-space symbol m(xi1, xi2), evaluated only at xi != 0.
using Symbol = std::function<std::complex<double>(double xi1, double xi2)>;

/// Coefficient-wise product with `symbol`; the zero mode is multiplied by
/// `at_zero`. Throws ValidationError on a non-finite symbol value.
SpectralField apply_multiplier(const SpectralField& F, const Symbol& symbol,
                               std::complex<double> at_zero);

/// Spectral derivative along `axis` (Nyquist modes dropped).
RealField derivative(const RealField& f, Axis axis);

/// Riesz transform with symbol i xi_j / |xi|, zero at xi = 0.
RealField riesz(const RealField& f, Axis axis);

/// (-Delta)^{-1} with the zero mode set to 0.
RealField inverse_laplacian(const RealField& f);

/// -Delta.
RealField negative_laplacian(const RealField& f);

/// Discrete H^s norm
///   sqrt( sum_k w (1 + |xi_k|^2)^s |F(k)|^2 ),  w = L^2 / (n1 n2)^2,
/// so that s = 0 reproduces the quadrature L2 norm of the samples.
double sobolev_norm(const RealField& f, double s);
double sobolev_norm(const SpectralField& F, double s);

/// sup |f| + sup |grad f| over the lattice, gradient taken spectrally.
double c1_norm(const RealField& f);

/// 2/3 rule: zero every coefficient with |k1| > n1/3 or |k2| > n2/3.
SpectralField dealias(const SpectralField& F);

/// Spectral restriction / zero-padding onto another lattice with the same box.
RealField resample(const RealField& f, const Grid& target);

/// Subtracts the sample mean.
RealField remove_mean(const RealField& f);

}  // namespace ipm
