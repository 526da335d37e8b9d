#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ipm/error.hpp"
#include "ipm/interpolation.hpp"
#include "ipm/lagrangian.hpp"
#include "ipm/operators.hpp"
#include "ipm/spectral.hpp"
#include "test_support.hpp"

namespace ipm {
namespace {

using testing::dipole_bump;
using testing::max_abs_diff;
using testing::random_modal;
using testing::relative_diff;

SolverConfig config(double dt, double T) {
  SolverConfig c;
  c.dt = dt;
  c.T = T;
  return c;
}

TEST(Interpolation, ReproducesSamples) {
  const Grid g = Grid::square(32, 32.0);
  const RealField f = random_modal(3, 10, 32.0).sample(g);
  const CubicInterpolator interp(f);
  double worst = 0.0;
  for (int i = 0; i < g.n1(); ++i) {
    for (int j = 0; j < g.n2(); ++j) worst = std::max(worst, std::abs(interp(g.node(i, j)) - f(i, j)));
  }
  EXPECT_LT(worst, 1e-13 * f.max_abs());
  // Periodic wrap, including negative coordinates.
  EXPECT_NEAR(interp({-32.0 + 3.0, 64.0 + 5.0}), f(3, 5), 1e-13 * f.max_abs());
}

TEST(Interpolation, FourthOrder) {
  const testing::ModalField m = random_modal(5, 3, 32.0);
  const std::vector<Point> probes = {{1.3, 2.7}, {17.41, 9.05}, {30.9, 0.2}, {8.8, 25.5}};
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const Grid g = Grid::square(n, 32.0);
    const CubicInterpolator interp(m.sample(g));
    double err = 0.0;
    for (Point p : probes) err = std::max(err, std::abs(interp(p) - m(p)));
    if (prev > 0.0) EXPECT_GT(std::log2(prev / err), 3.7) << n;
    prev = err;
  }
}

TEST(Interpolation, SmoothAcrossNodes) {
  // A C2 interpolant has bounded second differences at nodes.
  const Grid g = Grid::square(32, 32.0);
  const CubicInterpolator interp(random_modal(8, 6, 32.0).sample(g));
  const Point x = g.node(7, 11);
  double prev = 0.0;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const double second =
        (interp({x.x1 + d, x.x2}) - 2.0 * interp(x) + interp({x.x1 - d, x.x2})) / (d * d);
    if (prev != 0.0) EXPECT_NEAR(second, prev, 1e-2 * std::abs(prev) + 1e-3);
    prev = second;
  }
}

TEST(FlowMap, IdentityAndTranslation) {
  const Grid g = Grid::square(16, 32.0);
  const Point p{3.3, 31.9};
  const Point q = FlowMap::identity(g)(p);
  EXPECT_NEAR(q.x1, p.x1, 1e-14);
  EXPECT_NEAR(q.x2, p.x2, 1e-14);
  const Point r = FlowMap::translation(g, {1.5, -2.0})(p);
  EXPECT_NEAR(r.x1, 4.8, 1e-13);
  EXPECT_NEAR(r.x2, 29.9, 1e-13);
  EXPECT_NEAR(FlowMap::translation(g, {1.5, -2.0}).lipschitz_bound(), 1.0, 1e-14);
}

TEST(Compose, IdentityAndLatticeShift) {
  const Grid g = Grid::square(32, 32.0);
  const RealField f = random_modal(12, 8, 32.0).sample(g);
  EXPECT_LT(relative_diff(compose(f, FlowMap::identity(g)), f), 1e-13);
  const RealField shifted = compose(f, FlowMap::translation(g, {2 * g.dx1(), -g.dx2()}));
  EXPECT_NEAR(shifted(0, 5), f(2, 4), 1e-13 * f.max_abs());
}

TEST(Inversion, TranslationAndSmoothFlow) {
  const Grid g = Grid::square(32, 32.0);
  const FlowMap inv = invert_flow_map(FlowMap::translation(g, {0.7, -1.1}));
  EXPECT_NEAR(inv.displacement().c1().max(), -0.7, 1e-10);
  EXPECT_NEAR(inv.displacement().c2().min(), 1.1, 1e-10);

  const VectorField disp(0.3 * random_modal(21, 3, 32.0).sample(g),
                         0.3 * random_modal(22, 3, 32.0).sample(g));
  const FlowMap phi(disp);
  ASSERT_GT(phi.jacobian_determinant().min(), 0.0);
  const FlowMap psi = invert_flow_map(phi);
  EXPECT_LT(composition_defect(phi, psi), 1e-9);
}

TEST(Inversion, FailsOnFoldedMap) {
  const Grid g = Grid::square(32, 32.0);
  const auto big = RealField::from_function(g, [](Point p) { return 12.0 * std::sin(2 * M_PI * p.x1 / 32.0); });
  EXPECT_THROW(invert_flow_map(FlowMap(VectorField(big, RealField(g)))), InversionError);
}

TEST(Trajectory, ClosedFormShear) {
  // rho0 = sin(a x1) is stationary with u = (0, -sin a x1), so particles move
  // vertically with constant speed.
  const Grid g = Grid::square(64, 32.0);
  const double a = 2 * M_PI / 32.0;
  const auto rho = RealField::from_function(g, [a](Point p) { return std::sin(a * p.x1); });
  const std::vector<Point> starts = {g.node(5, 9), {g.x1(40), 3.21}, {g.x1(17), 30.0}};
  const auto traj = trace_trajectories(starts, rho, config(0.05, 2.0));
  for (const auto& t : traj) {
    ASSERT_EQ(t.times.size(), 41u);
    for (std::size_t k = 0; k < t.times.size(); ++k) {
      EXPECT_NEAR(t.positions[k].x1, t.x0.x1, 1e-12);
      EXPECT_NEAR(t.positions[k].x2, t.x0.x2 - t.times[k] * std::sin(a * t.x0.x1), 1e-12);
    }
  }
}

class FlowFixture : public ::testing::Test {
 protected:
  Grid grid = Grid::square(64, 32.0);
  RealField rho0 = testing::gaussian_dipole(grid, {10.0, 12.0}, 2.0, 1.0);
};

TEST_F(FlowFixture, LagrangianReconstructionMatchesEulerian) {
  const FlowSolution sol = solve_flow(rho0, config(0.02, 1.0));
  const RealField lag = reconstruct_density(rho0, sol.phi);
  const double s = grid.s();
  EXPECT_LT(sobolev_norm(lag - sol.record.rho_final, s), 1e-3 * sobolev_norm(rho0, s));
  // Incompressibility: the Jacobian stays at one.
  const RealField det = sol.phi.jacobian_determinant();
  EXPECT_LT(std::max(det.max() - 1.0, 1.0 - det.min()), 1e-3);
}

TEST_F(FlowFixture, VelocityIsDarcyFieldAlongFlow) {
  const FlowSolution sol = solve_flow(rho0, config(0.02, 0.5));
  const VectorField u = darcy_velocity(sol.record.rho_final);
  EXPECT_LT(relative_diff(sol.v, compose(u, sol.phi)), 1e-12);
}

TEST_F(FlowFixture, PsiOfScaledDatumIsFlowAtScaledTime) {
  const FlowMap psi = psi_map(0.5 * rho0, config(0.02, 1.0));
  const FlowSolution sol = solve_flow(rho0, config(0.01, 0.5));
  EXPECT_LT(relative_diff(psi.displacement(), sol.phi.displacement()), 1e-12);
}

TEST_F(FlowFixture, SnapshotsAtRequestedSteps) {
  const int steps[] = {0, 3, 10};
  const FlowSolution sol = solve_flow(rho0, config(0.05, 0.5), steps);
  ASSERT_EQ(sol.snapshots.size(), 3u);
  EXPECT_EQ(sol.snapshots[1].step, 3);
  EXPECT_NEAR(sol.snapshots[1].time, 0.15, 1e-14);
  EXPECT_EQ(sol.snapshots[0].phi.displacement().max_norm(), 0.0);
  EXPECT_LT(relative_diff(sol.snapshots[2].phi.displacement(), sol.phi.displacement()), 1e-14);
}

Trajectory synthetic(int m, double (*f1)(double), double (*f2)(double)) {
  Trajectory t;
  for (int i = 0; i < m; ++i) {
    const double time = double(i) / (m - 1);
    t.times.push_back(time);
    t.positions.push_back({f1(2 * time - 1), f2(2 * time - 1)});
  }
  return t;
}

TEST(Analyticity, PoleGivesKnownDecay) {
  // Chebyshev coefficients of 1/(3 - x) decay like (3 + sqrt 8)^-k.
  const auto t = synthetic(200, [](double x) { return 1.0 / (3.0 - x); }, [](double x) { return std::cos(x); });
  const AnalyticityReport r = analyticity_probe(t);
  EXPECT_FALSE(r.machine_floor_tail);
  EXPECT_NEAR(r.decay_rate, -std::log(3.0 + std::sqrt(8.0)), 0.1);
  EXPECT_GT(r.fit_quality, 0.99);
}

TEST(Analyticity, PolynomialsHitMachineFloor) {
  EXPECT_TRUE(analyticity_probe(synthetic(100, [](double) { return 4.0; }, [](double) { return -1.0; }))
                  .machine_floor_tail);
  EXPECT_TRUE(analyticity_probe(synthetic(100, [](double x) { return 2.0 + x; }, [](double x) { return 1.0 - 3 * x; }))
                  .machine_floor_tail);
}

TEST(Analyticity, RejectsShortOrIrregularSamples) {
  EXPECT_THROW(analyticity_probe(synthetic(10, [](double x) { return x; }, [](double x) { return x; })),
               ValidationError);
  Trajectory t = synthetic(80, [](double x) { return x; }, [](double x) { return x; });
  t.times[40] += 1e-3;
  EXPECT_THROW(analyticity_probe(t), ValidationError);
}

}  // namespace
}  // namespace ipm
