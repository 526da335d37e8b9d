#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace ipm::detail {
namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

// The FFTW planner is not re-entrant; execution with the new-array interface
// is. FFTW_ESTIMATE keeps the chosen algorithm (and so every result bit)
// independent of timing.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const Plans& plans_for(int n1, int n2) {
  static std::map<std::pair<int, int>, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(planner_mutex());
  auto& slot = cache[{n1, n2}];
  if (!slot) {
    slot = std::make_unique<Plans>();
    const std::size_t real_n = static_cast<std::size_t>(n1) * n2;
    const std::size_t complex_n = static_cast<std::size_t>(n1) * (n2 / 2 + 1);
    double* r = fftw_alloc_real(real_n);
    fftw_complex* c = fftw_alloc_complex(complex_n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    slot->r2c = fftw_plan_dft_r2c_2d(n1, n2, r, c, flags);
    slot->c2r = fftw_plan_dft_c2r_2d(n1, n2, c, r, flags);
    fftw_free(r);
    fftw_free(c);
  }
  return *slot;
}

}  // namespace

void forward(const Grid& grid, const double* in, std::complex<double>* out) {
  const Plans& p = plans_for(grid.n1(), grid.n2());
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void inverse(const Grid& grid, const std::complex<double>* in, double* out) {
  const Plans& p = plans_for(grid.n1(), grid.n2());
  thread_local Spectrum scratch;
  scratch.assign(in, in + grid.spectral_size());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] *= scale;
}

const SpectralTables& tables(const Grid& grid) {
  static std::mutex m;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<SpectralTables>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[{grid.n1(), grid.n2(), grid.box_length()}];
  if (!slot) {
    auto t = std::make_unique<SpectralTables>();
    const std::size_t size = grid.spectral_size();
    t->xi1.resize(size);
    t->xi2.resize(size);
    t->xi1_odd.resize(size);
    t->xi2_odd.resize(size);
    t->xi_sq.resize(size);
    t->inv_xi_sq.resize(size);
    t->keep.resize(size);
    t->multiplicity.resize(size);
    t->inv_spline.resize(size);
    const double scale = grid.wavenumber_scale();
    const int n1 = grid.n1();
    const int n2 = grid.n2();
    const int h = grid.half_n2();
    for (int i = 0; i < n1; ++i) {
      const int k1 = grid.k1(i);
      for (int j = 0; j < h; ++j) {
        const int k2 = grid.k2(j);
        const std::size_t idx = static_cast<std::size_t>(i) * h + j;
        const double a = scale * k1;
        const double b = scale * k2;
        t->xi1[idx] = a;
        t->xi2[idx] = b;
        t->xi1_odd[idx] = (2 * k1 == -n1) ? 0.0 : a;
        t->xi2_odd[idx] = (2 * k2 == -n2) ? 0.0 : b;
        t->xi_sq[idx] = a * a + b * b;
        t->inv_xi_sq[idx] = (k1 == 0 && k2 == 0) ? 0.0 : 1.0 / (a * a + b * b);
        t->keep[idx] = (3 * std::abs(k1) <= n1 && 3 * std::abs(k2) <= n2) ? 1 : 0;
        t->multiplicity[idx] = (j == 0 || j == n2 / 2) ? 1.0 : 2.0;
        const double b1 = (2.0 + std::cos(2.0 * M_PI * k1 / n1)) / 3.0;
        const double b2 = (2.0 + std::cos(2.0 * M_PI * k2 / n2)) / 3.0;
        t->inv_spline[idx] = 1.0 / (b1 * b2);
      }
    }
    slot = std::move(t);
  }
  return *slot;
}

}  // namespace ipm::detail
