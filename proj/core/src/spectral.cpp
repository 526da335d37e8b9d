#include "ipm/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "ipm/error.hpp"

namespace ipm {

using detail::Spectrum;
using detail::tables;

SpectralField forward_transform(const RealField& f) {
  if (!f.all_finite()) throw ValidationError("forward_transform: non-finite sample");
  SpectralField out(f.grid());
  detail::forward(f.grid(), f.data().data(), out.data().data());
  return out;
}

double hermitian_defect(const SpectralField& F) {
  const Grid& g = F.grid();
  double peak = 0.0;
  for (const auto& c : F.data()) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return 0.0;
  double worst = 0.0;
  for (int j : {0, g.n2() / 2}) {
    for (int i = 0; i < g.n1(); ++i) {
      const int mirror = (g.n1() - i) % g.n1();
      worst = std::max(worst, std::abs(F(i, j) - std::conj(F(mirror, j))));
    }
  }
  return worst / peak;
}

RealField inverse_transform(const SpectralField& F) {
  const double defect = hermitian_defect(F);
  if (defect > 1e-10) {
    throw ValidationError("inverse_transform: conjugate symmetry broken (relative defect " +
                          std::to_string(defect) + ")");
  }
  RealField out(F.grid());
  detail::inverse(F.grid(), F.data().data(), out.data().data());
  return out;
}

SpectralField apply_multiplier(const SpectralField& F, const Symbol& symbol,
                               std::complex<double> at_zero) {
  if (!std::isfinite(at_zero.real()) || !std::isfinite(at_zero.imag())) {
    throw ValidationError("apply_multiplier: non-finite zero-mode value");
  }
  const auto& t = tables(F.grid());
  SpectralField out(F.grid());
  auto& dst = out.data();
  const auto& src = F.data();
  dst[0] = src[0] * at_zero;
  for (std::size_t k = 1; k < src.size(); ++k) {
    const std::complex<double> m = symbol(t.xi1[k], t.xi2[k]);
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
      throw ValidationError("apply_multiplier: non-finite symbol at xi = (" +
                            std::to_string(t.xi1[k]) + ", " + std::to_string(t.xi2[k]) + ")");
    }
    dst[k] = src[k] * m;
  }
  return out;
}

namespace {

template <typename Fn>
RealField filter(const RealField& f, Fn&& fn) {
  SpectralField F = forward_transform(f);
  const auto& t = tables(f.grid());
  auto& c = F.data();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = fn(t, k, c[k]);
  RealField out(f.grid());
  detail::inverse(f.grid(), c.data(), out.data().data());
  return out;
}

constexpr std::complex<double> I(0.0, 1.0);

}  // namespace

RealField derivative(const RealField& f, Axis axis) {
  return filter(f, [axis](const detail::SpectralTables& t, std::size_t k, std::complex<double> c) {
    const double xi = axis == Axis::x1 ? t.xi1_odd[k] : t.xi2_odd[k];
    return I * xi * c;
  });
}

RealField riesz(const RealField& f, Axis axis) {
  return filter(f, [axis](const detail::SpectralTables& t, std::size_t k, std::complex<double> c) {
    const double xi = axis == Axis::x1 ? t.xi1_odd[k] : t.xi2_odd[k];
    return I * xi * std::sqrt(t.inv_xi_sq[k]) * c;
  });
}

RealField inverse_laplacian(const RealField& f) {
  return filter(f, [](const detail::SpectralTables& t, std::size_t k, std::complex<double> c) {
    return t.inv_xi_sq[k] * c;
  });
}

RealField negative_laplacian(const RealField& f) {
  return filter(f, [](const detail::SpectralTables& t, std::size_t k, std::complex<double> c) {
    return t.xi_sq[k] * c;
  });
}

double sobolev_norm(const SpectralField& F, double s) {
  if (!(s >= 0.0)) throw ValidationError("sobolev_norm: s must be nonnegative");
  const Grid& g = F.grid();
  const auto& t = tables(g);
  const auto& c = F.data();
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    sum += t.multiplicity[k] * std::pow(1.0 + t.xi_sq[k], s) * std::norm(c[k]);
  }
  const double n = static_cast<double>(g.size());
  const double weight = g.box_length() * g.box_length() / (n * n);
  return std::sqrt(sum * weight);
}

double sobolev_norm(const RealField& f, double s) { return sobolev_norm(forward_transform(f), s); }

double c1_norm(const RealField& f) {
  const RealField d1 = derivative(f, Axis::x1);
  const RealField d2 = derivative(f, Axis::x2);
  double grad = 0.0;
  for (std::size_t k = 0; k < f.data().size(); ++k) grad = std::max(grad, std::hypot(d1[k], d2[k]));
  return f.max_abs() + grad;
}

SpectralField dealias(const SpectralField& F) {
  const auto& t = tables(F.grid());
  SpectralField out = F;
  auto& c = out.data();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!t.keep[k]) c[k] = 0.0;
  }
  return out;
}

RealField resample(const RealField& f, const Grid& target) {
  if (target.box_length() != f.grid().box_length()) {
    throw ValidationError("resample: box lengths differ");
  }
  const Grid& src = f.grid();
  const SpectralField F = forward_transform(f);
  SpectralField G(target);
  // Modes strictly inside both Nyquist limits carry over; Nyquist modes drop.
  const int k1max = std::min(src.n1(), target.n1()) / 2 - 1;
  const int k2max = std::min(src.n2(), target.n2()) / 2 - 1;
  const double scale = static_cast<double>(target.size()) / static_cast<double>(src.size());
  for (int k1 = -k1max; k1 <= k1max; ++k1) {
    const int is = (k1 + src.n1()) % src.n1();
    const int it = (k1 + target.n1()) % target.n1();
    for (int k2 = 0; k2 <= k2max; ++k2) G(it, k2) = scale * F(is, k2);
  }
  RealField out(target);
  detail::inverse(target, G.data().data(), out.data().data());
  return out;
}

RealField remove_mean(const RealField& f) {
  RealField out = f;
  const double m = f.mean();
  for (double& v : out.data()) v -= m;
  return out;
}

}  // namespace ipm
