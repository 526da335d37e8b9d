#pragma once

#include <complex>
#include <vector>

#include "ipm/grid.hpp"

namespace ipm::detail {

using Spectrum = std::vector<std::complex<double>>;

/// Unscaled real-to-complex transform into the half layout.
void forward(const Grid& grid, const double* in, std::complex<double>* out);

/// Scaled complex-to-real transform. No symmetry check; `in` is untouched.
void inverse(const Grid& grid, const std::complex<double>* in, double* out);

/// Per-lattice frequency tables in the half layout.
struct SpectralTables {
  std::vector<double> xi1;      // signed, Nyquist row negative
  std::vector<double> xi2;      // Nyquist column negative
  std::vector<double> xi1_odd;  // Nyquist row zeroed, for odd symbols
  std::vector<double> xi2_odd;
  std::vector<double> xi_sq;
  std::vector<double> inv_xi_sq;     // zero at xi = 0
  std::vector<unsigned char> keep;   // 2/3-rule mask
  std::vector<double> multiplicity;  // 1 on self-paired columns, else 2
  std::vector<double> inv_spline;    // cubic B-spline prefilter
};

/// Cached, thread-safe; the reference stays valid for the program lifetime.
const SpectralTables& tables(const Grid& grid);

}  // namespace ipm::detail
