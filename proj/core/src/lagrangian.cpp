#include "ipm/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "integrator.hpp"
#include "ipm/error.hpp"
#include "ipm/interpolation.hpp"
#include "ipm/spectral.hpp"

namespace ipm {

FlowMap FlowMap::identity(const Grid& grid) { return FlowMap(VectorField(grid)); }

FlowMap FlowMap::translation(const Grid& grid, Point a) {
  return FlowMap(VectorField(RealField::constant(grid, a.x1), RealField::constant(grid, a.x2)));
}

Point FlowMap::operator()(Point x) const {
  return x + interp_(x);
}

Point FlowMap::at_node(int i, int j) const {
  const std::size_t k = grid().index(i, j);
  return grid().node(i, j) + g_.at(k);
}

namespace {

struct Jacobian {
  RealField a, b, c, d;  // dg1/dx1, dg1/dx2, dg2/dx1, dg2/dx2
};

Jacobian displacement_jacobian(const VectorField& g) {
  return {derivative(g.c1(), Axis::x1), derivative(g.c1(), Axis::x2),
          derivative(g.c2(), Axis::x1), derivative(g.c2(), Axis::x2)};
}

double operator_norm(double a, double b, double c, double d) {
  const double s = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  return std::sqrt(0.5 * (s + std::sqrt(std::max(0.0, s * s - 4.0 * det * det))));
}

}  // namespace

RealField FlowMap::jacobian_determinant() const {
  const Jacobian J = displacement_jacobian(g_);
  RealField det(grid());
  for (std::size_t k = 0; k < grid().size(); ++k) {
    det[k] = (1.0 + J.a[k]) * (1.0 + J.d[k]) - J.b[k] * J.c[k];
  }
  return det;
}

double FlowMap::lipschitz_bound() const {
  const Jacobian J = displacement_jacobian(g_);
  double m = 0.0;
  for (std::size_t k = 0; k < grid().size(); ++k) {
    m = std::max(m, operator_norm(1.0 + J.a[k], J.b[k], J.c[k], 1.0 + J.d[k]));
  }
  return m;
}

double FlowMap::max_displacement_gradient() const {
  const Jacobian J = displacement_jacobian(g_);
  double m = 0.0;
  for (std::size_t k = 0; k < grid().size(); ++k) {
    m = std::max(m, operator_norm(J.a[k], J.b[k], J.c[k], J.d[k]));
  }
  return m;
}

RealField compose(const RealField& f, const FlowMap& phi) {
  require_same_lattice(f.grid(), phi.grid(), "compose");
  const Grid& grid = f.grid();
  const CubicInterpolator interp(f);
  RealField out(grid);
  for (int i = 0; i < grid.n1(); ++i) {
    for (int j = 0; j < grid.n2(); ++j) out(i, j) = interp(phi.at_node(i, j));
  }
  return out;
}

VectorField compose(const VectorField& f, const FlowMap& phi) {
  require_same_lattice(f.grid(), phi.grid(), "compose");
  const Grid& grid = f.grid();
  const PairInterpolator interp(f.c1(), f.c2());
  VectorField out(grid);
  for (int i = 0; i < grid.n1(); ++i) {
    for (int j = 0; j < grid.n2(); ++j) {
      const Point v = interp(phi.at_node(i, j));
      const std::size_t k = grid.index(i, j);
      out.c1()[k] = v.x1;
      out.c2()[k] = v.x2;
    }
  }
  return out;
}

FlowMap invert_flow_map(const FlowMap& phi, const InversionOptions& opts) {
  const Grid& grid = phi.grid();
  VectorField h(grid);
  VectorField next(grid);
  double previous = INFINITY;
  int rising = 0;
  double residual = INFINITY;
  for (int it = 0; it < opts.max_iterations; ++it) {
    residual = 0.0;
    for (int i = 0; i < grid.n1(); ++i) {
      for (int j = 0; j < grid.n2(); ++j) {
        const std::size_t k = grid.index(i, j);
        const Point x = grid.node(i, j) + h.at(k);
        const Point gx = phi.displacement_at(x);
        next.c1()[k] = -gx.x1;
        next.c2()[k] = -gx.x2;
        residual = std::max(residual, std::hypot(next.c1()[k] - h.c1()[k], next.c2()[k] - h.c2()[k]));
      }
    }
    std::swap(h, next);
    if (!std::isfinite(residual)) break;
    if (residual <= opts.tolerance) return FlowMap(std::move(h));
    rising = residual >= previous ? rising + 1 : 0;
    if (rising >= 3) throw InversionError("invert_flow_map: fixed point is not contracting", residual);
    previous = residual;
  }
  throw InversionError("invert_flow_map: no convergence", residual);
}

double composition_defect(const FlowMap& phi, const FlowMap& psi) {
  require_same_lattice(phi.grid(), psi.grid(), "composition_defect");
  const Grid& grid = phi.grid();
  double worst = 0.0;
  for (int i = 0; i < grid.n1(); ++i) {
    for (int j = 0; j < grid.n2(); ++j) {
      const Point x = grid.node(i, j);
      const Point y = phi(psi.at_node(i, j));
      worst = std::max(worst, periodic_distance(y, x, grid.box_length()));
    }
  }
  return worst;
}

FlowSolution solve_flow(const RealField& rho0, const SolverConfig& cfg,
                        std::span<const int> snapshot_steps) {
  detail::CoupledOptions opts;
  opts.track_flow = true;
  opts.snapshot_steps = snapshot_steps;
  detail::CoupledResult r = detail::integrate(rho0, cfg, opts);
  return FlowSolution{FlowMap(std::move(*r.displacement)), std::move(*r.v_final),
                      std::move(r.record), std::move(r.snapshots)};
}

RealField reconstruct_density(const RealField& rho0, const FlowMap& phi,
                              const InversionOptions& opts) {
  return compose(rho0, invert_flow_map(phi, opts));
}

FlowMap psi_map(const RealField& rho0, SolverConfig cfg) {
  cfg.T = 1.0;
  return solve_flow(rho0, cfg).phi;
}

std::vector<Trajectory> trace_trajectories(std::span<const Point> starts, const RealField& rho0,
                                           const SolverConfig& cfg, int sample_stride) {
  if (sample_stride < 1) throw ValidationError("trace_trajectories: sample_stride must be >= 1");
  detail::CoupledOptions opts;
  opts.particles = starts;
  opts.particle_stride = sample_stride;
  const detail::CoupledResult r = detail::integrate(rho0, cfg, opts);
  std::vector<Trajectory> out(starts.size());
  for (std::size_t p = 0; p < starts.size(); ++p) {
    out[p].x0 = starts[p];
    out[p].times = r.particle_times;
    out[p].positions.reserve(r.particle_history.size());
    for (const auto& sample : r.particle_history) out[p].positions.push_back(sample[p]);
  }
  return out;
}

Trajectory trace_trajectory(Point x0, const RealField& rho0, const SolverConfig& cfg,
                            int sample_stride) {
  const Point starts[] = {x0};
  return trace_trajectories(starts, rho0, cfg, sample_stride).front();
}

}  // namespace ipm
