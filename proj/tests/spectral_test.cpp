#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ipm/error.hpp"
#include "ipm/spectral.hpp"
#include "test_support.hpp"

namespace ipm {
namespace {

using testing::ModalField;
using testing::random_modal;
using testing::relative_diff;

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid(7, 8, 32.0, 2.5), ValidationError);
  EXPECT_THROW(Grid(8, 6, 32.0, 2.5), ValidationError);
  EXPECT_THROW(Grid(8, 8, 0.0, 2.5), ValidationError);
  EXPECT_THROW(Grid(8, 8, 32.0, 2.0), ValidationError);
  EXPECT_NO_THROW(Grid(8, 16, 32.0, 2.5));
}

TEST(Grid, Wavenumbers) {
  const Grid g(8, 8, 32.0, 2.5);
  EXPECT_EQ(g.k1(0), 0);
  EXPECT_EQ(g.k1(3), 3);
  EXPECT_EQ(g.k1(4), -4);
  EXPECT_EQ(g.k1(7), -1);
  EXPECT_EQ(g.half_n2(), 5);
  EXPECT_DOUBLE_EQ(g.dx1(), 4.0);
  EXPECT_DOUBLE_EQ(g.x2(3), 12.0);
}

TEST(Transform, ConstantGivesMassAtZero) {
  const Grid g = Grid::square(16);
  const SpectralField F = forward_transform(RealField::constant(g, 1.0));
  EXPECT_NEAR(F(0, 0).real(), 256.0, 1e-12);
  for (int i = 0; i < g.n1(); ++i) {
    for (int j = 0; j < g.half_n2(); ++j) {
      if (i == 0 && j == 0) continue;
      EXPECT_LT(std::abs(F(i, j)), 1e-12);
    }
  }
}

TEST(Transform, CosineModeAmplitude) {
  const Grid g = Grid::square(32, 32.0);
  const auto f = RealField::from_function(g, [](Point p) { return std::cos(2 * M_PI * p.x1 / 32.0); });
  const SpectralField F = forward_transform(f);
  const double N = g.size();
  EXPECT_NEAR(F.at_wavenumber(1, 0).real(), N / 2, 1e-9);
  EXPECT_NEAR(F.at_wavenumber(-1, 0).real(), N / 2, 1e-9);
  EXPECT_NEAR(F.at_wavenumber(1, 0).imag(), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(F.at_wavenumber(0, 1)), 0.0, 1e-9);
}

TEST(Transform, RoundTripAcrossShapes) {
  const int shapes[][2] = {{8, 8}, {16, 16}, {64, 64}, {256, 256}, {32, 64}, {48, 16}};
  unsigned seed = 1;
  for (const auto& s : shapes) {
    const Grid g(s[0], s[1], 32.0, 2.5);
    const int kmax = std::min(s[0], s[1]) / 2 - 1;
    const RealField f = random_modal(seed++, std::min(kmax, 10), 32.0, false).sample(g);
    const RealField back = inverse_transform(forward_transform(f));
    EXPECT_LT(relative_diff(f, back), 1e-12) << s[0] << "x" << s[1];
  }
}

TEST(Transform, ShiftTheorem) {
  const Grid g = Grid::square(32, 32.0);
  const ModalField m = random_modal(7, 6, 32.0);
  const RealField f = m.sample(g);
  const RealField shifted = RealField::from_function(g, [&](Point p) { return m({p.x1 - 3.0, p.x2}); });
  const SpectralField F = forward_transform(f);
  const SpectralField S = forward_transform(shifted);
  for (int k1 = -6; k1 <= 6; ++k1) {
    const double phase = -2 * M_PI * k1 * 3.0 / 32.0;
    const auto expect = F.at_wavenumber(k1, 2) * std::complex<double>(std::cos(phase), std::sin(phase));
    EXPECT_LT(std::abs(S.at_wavenumber(k1, 2) - expect), 1e-10);
  }
}

TEST(Transform, RejectsNonFinite) {
  const Grid g = Grid::square(16);
  RealField f(g);
  f(3, 4) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(forward_transform(f), ValidationError);
}

TEST(Transform, InverseOfZeroAndSingleMode) {
  const Grid g = Grid::square(16, 32.0);
  EXPECT_EQ(inverse_transform(SpectralField(g)).max_abs(), 0.0);

  SpectralField F(g);
  const double N = g.size();
  F(1, 0) = N / 2;
  F(g.n1() - 1, 0) = N / 2;
  const RealField f = inverse_transform(F);
  const auto expect = RealField::from_function(g, [](Point p) { return std::cos(2 * M_PI * p.x1 / 32.0); });
  EXPECT_LT(testing::max_abs_diff(f, expect), 1e-14);
}

TEST(Transform, RejectsBrokenHermitianSymmetry) {
  const Grid g = Grid::square(16);
  SpectralField F(g);
  F(1, 0) = 1.0;
  F(g.n1() - 1, 0) = 0.0;
  EXPECT_GT(hermitian_defect(F), 0.1);
  EXPECT_THROW(inverse_transform(F), ValidationError);
  SpectralField Z(g);
  Z(0, 0) = std::complex<double>(0.0, 1.0);
  EXPECT_THROW(inverse_transform(Z), ValidationError);
}

TEST(Multiplier, MatchesModalOracle) {
  const Grid g = Grid::square(32, 20.0);
  const ModalField m = random_modal(3, 8, 20.0);
  const SpectralField F = forward_transform(m.sample(g));

  const auto id = inverse_transform(apply_multiplier(F, [](double, double) { return 1.0; }, 1.0));
  EXPECT_LT(relative_diff(id, m.sample(g)), 1e-12);

  const auto dx = inverse_transform(
      apply_multiplier(F, [](double a, double) { return std::complex<double>(0.0, a); }, 0.0));
  EXPECT_LT(relative_diff(dx, m.derivative(1).sample(g)), 1e-12);
  EXPECT_LT(relative_diff(derivative(m.sample(g), Axis::x2), m.derivative(2).sample(g)), 1e-12);
}

TEST(Multiplier, InverseLaplacianRoundTrip) {
  const Grid g = Grid::square(32, 32.0);
  const RealField f = random_modal(11, 8, 32.0).sample(g);
  const RealField back = negative_laplacian(inverse_laplacian(f));
  EXPECT_LT(relative_diff(f, back), 1e-12);
  const ModalField lap = random_modal(11, 8, 32.0).map([](double a, double b) { return a * a + b * b; });
  EXPECT_LT(relative_diff(negative_laplacian(f), lap.sample(g)), 1e-12);
}

TEST(Multiplier, RejectsNonFiniteSymbol) {
  const Grid g = Grid::square(16);
  const SpectralField F = forward_transform(random_modal(2, 4, 32.0).sample(g));
  const Symbol bad = [](double a, double) { return a > 0.5 ? std::numeric_limits<double>::infinity() : 1.0; };
  EXPECT_THROW(apply_multiplier(F, bad, 0.0), ValidationError);
}

TEST(Riesz, SineMode) {
  // R_1 = d_1 (-Delta)^{-1/2} maps sin(a x1) to cos(a x1).
  const Grid g = Grid::square(64, 32.0);
  const auto f = RealField::from_function(g, [](Point p) { return std::sin(2 * M_PI * p.x1 / 32.0); });
  const auto expect = RealField::from_function(g, [](Point p) { return std::cos(2 * M_PI * p.x1 / 32.0); });
  EXPECT_LT(testing::max_abs_diff(riesz(f, Axis::x1), expect), 1e-12);
  EXPECT_LT(riesz(f, Axis::x2).max_abs(), 1e-12);
}

TEST(Riesz, SumOfSquaresIsMinusIdentity) {
  const Grid g = Grid::square(64, 32.0);
  const RealField f = random_modal(5, 12, 32.0).sample(g);
  const RealField r11 = riesz(riesz(f, Axis::x1), Axis::x1);
  const RealField r22 = riesz(riesz(f, Axis::x2), Axis::x2);
  EXPECT_LT(relative_diff(r11 + r22, -f), 1e-12);
}

TEST(Riesz, MatchesModalOracle) {
  const Grid g = Grid::square(32, 25.0);
  const ModalField m = random_modal(9, 7, 25.0);
  const ModalField r2 = m.map([](double a, double b) {
    return std::complex<double>(0.0, b / std::hypot(a, b));
  });
  EXPECT_LT(relative_diff(riesz(m.sample(g), Axis::x2), r2.sample(g)), 1e-12);
}

TEST(Sobolev, ZeroAndPlaneWave) {
  const Grid g = Grid(64, 64, 2 * M_PI, 2.5);
  EXPECT_EQ(sobolev_norm(RealField(g), 2.5), 0.0);
  const auto f = RealField::from_function(g, [](Point p) { return std::sin(p.x1); });
  EXPECT_NEAR(sobolev_norm(f, 0.0), std::sqrt(2.0) * M_PI, 1e-12);
  EXPECT_NEAR(sobolev_norm(f, 2.5), std::sqrt(2.0) * M_PI * std::pow(2.0, 1.25), 1e-11);
  const auto h = RealField::from_function(g, [](Point p) { return std::cos(3 * p.x2); });
  EXPECT_NEAR(sobolev_norm(h, 3.0) / sobolev_norm(h, 0.0), std::pow(10.0, 1.5), 1e-9);
}

TEST(Sobolev, ParsevalAndMonotone) {
  const Grid g(32, 64, 17.0, 2.5);
  const RealField f = random_modal(21, 10, 17.0, false).sample(g);
  EXPECT_NEAR(sobolev_norm(f, 0.0), f.l2_norm(), 1e-12 * f.l2_norm());
  double prev = 0.0;
  for (double s : {0.0, 0.5, 1.0, 2.5, 3.0}) {
    const double v = sobolev_norm(f, s);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(C1Norm, Basics) {
  const Grid g(256, 256, 2 * M_PI, 2.5);
  EXPECT_EQ(c1_norm(RealField(g)), 0.0);
  EXPECT_NEAR(c1_norm(RealField::constant(g, -3.0)), 3.0, 1e-12);
  const auto f = RealField::from_function(g, [](Point p) { return std::sin(p.x1); });
  EXPECT_NEAR(c1_norm(f), 2.0, 1e-12);
}

TEST(Dealias, KeepsLowModesAndKillsHigh) {
  const Grid g = Grid::square(16, 32.0);
  const ModalField low = random_modal(4, 5, 32.0);
  const auto F = forward_transform(low.sample(g));
  EXPECT_LT(relative_diff(inverse_transform(dealias(F)), low.sample(g)), 1e-13);

  const auto high = RealField::from_function(g, [](Point p) { return std::cos(2 * M_PI * 6 * p.x1 / 32.0); });
  EXPECT_LT(inverse_transform(dealias(forward_transform(high))).max_abs(), 1e-14);
}

TEST(Dealias, ProductMatchesExactConvolution) {
  const Grid g = Grid::square(16, 32.0);
  const ModalField a = random_modal(31, 5, 32.0);
  const ModalField b = random_modal(32, 5, 32.0);
  RealField prod = a.sample(g);
  const RealField bs = b.sample(g);
  for (std::size_t k = 0; k < prod.data().size(); ++k) prod[k] *= bs[k];
  const RealField got = inverse_transform(dealias(forward_transform(prod)));
  const RealField expect = testing::truncate(a * b, 5).sample(g);
  EXPECT_LT(testing::max_abs_diff(got, expect), 1e-12);
}

TEST(Resample, PadAndTruncate) {
  const Grid coarse = Grid::square(32, 32.0);
  const Grid fine = Grid::square(64, 32.0);
  const ModalField m = random_modal(41, 10, 32.0);
  EXPECT_LT(relative_diff(resample(m.sample(coarse), fine), m.sample(fine)), 1e-12);
  EXPECT_LT(relative_diff(resample(m.sample(fine), coarse), m.sample(coarse)), 1e-12);
}

TEST(RemoveMean, SubtractsSampleMean) {
  const Grid g = Grid::square(16);
  const RealField f = random_modal(1, 4, 32.0, false).sample(g);
  const RealField z = remove_mean(f);
  EXPECT_NEAR(z.mean(), 0.0, 1e-14);
  EXPECT_NEAR(z[5] - f[5], -f.mean(), 1e-14);
}

}  // namespace
}  // namespace ipm
