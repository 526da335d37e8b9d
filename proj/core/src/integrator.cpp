#include "integrator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ipm/error.hpp"
#include "ipm/interpolation.hpp"
#include "ipm/operators.hpp"
#include "ipm/spectral.hpp"
#include "kernels.hpp"

namespace ipm::detail {
namespace {

struct State {
  Spectrum rho;
  std::vector<double> g1, g2;
  std::vector<Point> particles;
};

struct Workspace {
  std::vector<double> u1, u2;
};

// y_out = y + c * k, componentwise.
void axpy(const State& y, double c, const State& k, State& out) {
  out.rho.resize(y.rho.size());
  for (std::size_t m = 0; m < y.rho.size(); ++m) out.rho[m] = y.rho[m] + c * k.rho[m];
  out.g1.resize(y.g1.size());
  out.g2.resize(y.g2.size());
  for (std::size_t m = 0; m < y.g1.size(); ++m) {
    out.g1[m] = y.g1[m] + c * k.g1[m];
    out.g2[m] = y.g2[m] + c * k.g2[m];
  }
  out.particles.resize(y.particles.size());
  for (std::size_t m = 0; m < y.particles.size(); ++m) {
    out.particles[m] = y.particles[m] + c * k.particles[m];
  }
}

class Rhs {
 public:
  Rhs(const Grid& grid, bool dealias) : grid_(grid), dealias_(dealias) {
    u1_.resize(grid.size());
    u2_.resize(grid.size());
  }


  // Returns max |u| over the lattice.
  double operator()(const State& y, State& k) {
    darcy_samples(grid_, y.rho, u1_.data(), u2_.data());
    transport_tendency(grid_, y.rho, u1_.data(), u2_.data(), dealias_, k.rho);
    std::optional<PairInterpolator> u;
    if (!y.g1.empty()) {
      RealField c1(grid_);
      RealField c2(grid_);
      darcy_spline(grid_, y.rho, c1.data().data(), c2.data().data());
      u.emplace(PairInterpolator::from_coefficients(std::move(c1), std::move(c2)));
    }
    k.g1.resize(y.g1.size());
    k.g2.resize(y.g2.size());
    if (!y.g1.empty()) {
      for (int i = 0; i < grid_.n1(); ++i) {
        for (int j = 0; j < grid_.n2(); ++j) {
          const std::size_t m = grid_.index(i, j);
          const Point p = grid_.node(i, j) + Point{y.g1[m], y.g2[m]};
          const Point w = (*u)(p);
          k.g1[m] = w.x1;
          k.g2[m] = w.x2;
        }
      }
    }
    // Particles see the trigonometric interpolant: a piecewise-cubic velocity
    // would leave cell-crossing kinks in the high time derivatives of a path.
    k.particles.resize(y.particles.size());
    if (!y.particles.empty()) {
      const DarcyEvaluator exact(grid_, y.rho);
      for (std::size_t m = 0; m < y.particles.size(); ++m) k.particles[m] = exact(y.particles[m]);
    }
    double umax = 0.0;
    for (std::size_t m = 0; m < u1_.size(); ++m) umax = std::max(umax, std::hypot(u1_[m], u2_[m]));
    return umax;
  }

  VectorField velocity() const {
    return VectorField(RealField(grid_, u1_), RealField(grid_, u2_));
  }

 private:
  Grid grid_;
  bool dealias_;
  std::vector<double> u1_, u2_;
};

StepDiagnostics diagnose(const Grid& grid, const Spectrum& rho_hat, double time,
                         std::vector<double>& samples) {
  samples.resize(grid.size());
  inverse(grid, rho_hat.data(), samples.data());
  const RealField rho(grid, samples);
  StepDiagnostics d;
  d.time = time;
  d.mean = rho.mean();
  d.l2 = rho.l2_norm();
  d.min = rho.min();
  d.max = rho.max();
  d.hs = sobolev_norm(SpectralField(grid, rho_hat), grid.s());
  return d;
}

VectorField displacement_field(const Grid& grid, const State& y) {
  return VectorField(RealField(grid, y.g1), RealField(grid, y.g2));
}

}  // namespace

CoupledResult integrate(const RealField& rho0, const SolverConfig& cfg,
                        const CoupledOptions& opts) {
  cfg.validate();
  require_mean_zero(rho0, "solver");
  const Grid& grid = rho0.grid();
  const int steps = cfg.step_count();
  const double dt = cfg.reverse ? -cfg.effective_dt() : cfg.effective_dt();
  const double cfl_scale = std::max(grid.n1(), grid.n2()) / grid.box_length();

  State y;
  y.rho = forward_transform(rho0).data();
  if (opts.track_flow) {
    y.g1.assign(grid.size(), 0.0);
    y.g2.assign(grid.size(), 0.0);
  }
  y.particles.assign(opts.particles.begin(), opts.particles.end());

  CoupledResult result{SolutionRecord{RealField(grid), {}, steps}, {}, {}, {}, {}, {}};
  std::vector<double> samples;
  result.record.diagnostics.reserve(steps + 1);
  result.record.diagnostics.push_back(diagnose(grid, y.rho, 0.0, samples));
  const double hs0 = result.record.diagnostics.front().hs;

  Rhs rhs(grid, cfg.dealias);
  auto wants_snapshot = [&](int step) {
    return std::find(opts.snapshot_steps.begin(), opts.snapshot_steps.end(), step) !=
           opts.snapshot_steps.end();
  };
  auto take_snapshot = [&](int step, double time) {
    State scratch;
    rhs(y, scratch);
    const VectorField u = rhs.velocity();
    FlowMap phi(displacement_field(grid, y));
    VectorField v = compose(u, phi);
    result.snapshots.push_back({step, time, std::move(phi), std::move(v)});
  };
  auto record_particles = [&](double time) {
    if (y.particles.empty()) return;
    result.particle_times.push_back(time);
    result.particle_history.push_back(y.particles);
  };

  if (opts.track_flow && wants_snapshot(0)) take_snapshot(0, 0.0);
  record_particles(0.0);

  State k1, k2, k3, k4, tmp;
  for (int step = 1; step <= steps; ++step) {
    const double umax = rhs(y, k1);
    if (umax * std::abs(dt) * cfl_scale > cfg.cfl_guard) {
      throw SolverAbort("CFL guard exceeded: max|u| = " + std::to_string(umax), step);
    }
    axpy(y, 0.5 * dt, k1, tmp);
    rhs(tmp, k2);
    axpy(y, 0.5 * dt, k2, tmp);
    rhs(tmp, k3);
    axpy(y, dt, k3, tmp);
    rhs(tmp, k4);
    for (std::size_t m = 0; m < y.rho.size(); ++m) {
      y.rho[m] += dt / 6.0 * (k1.rho[m] + 2.0 * k2.rho[m] + 2.0 * k3.rho[m] + k4.rho[m]);
    }
    for (std::size_t m = 0; m < y.g1.size(); ++m) {
      y.g1[m] += dt / 6.0 * (k1.g1[m] + 2.0 * k2.g1[m] + 2.0 * k3.g1[m] + k4.g1[m]);
      y.g2[m] += dt / 6.0 * (k1.g2[m] + 2.0 * k2.g2[m] + 2.0 * k3.g2[m] + k4.g2[m]);
    }
    for (std::size_t m = 0; m < y.particles.size(); ++m) {
      y.particles[m] = y.particles[m] + (dt / 6.0) * (k1.particles[m] + 2.0 * k2.particles[m] +
                                                      2.0 * k3.particles[m] + k4.particles[m]);
    }

    const double time = step * dt;
    const StepDiagnostics d = diagnose(grid, y.rho, time, samples);
    if (!std::isfinite(d.hs) || !std::isfinite(d.min) || !std::isfinite(d.max)) {
      throw SolverAbort("non-finite density", step);
    }
    if (hs0 > 0.0 && d.hs > cfg.blowup_factor * hs0) {
      throw SolverAbort("H^s surveillance threshold exceeded", step);
    }
    result.record.diagnostics.push_back(d);

    if (opts.track_flow) {
      const double det = min_jacobian(grid, y.g1.data(), y.g2.data());
      if (!(det > 0.0)) {
        throw SolverAbort("flow map lost invertibility (det d phi <= 0)", step);
      }
      if (wants_snapshot(step)) take_snapshot(step, time);
    }
    if (step % std::max(opts.particle_stride, 1) == 0) record_particles(time);
  }

  if (steps == 0) {
    result.record.rho_final = rho0;
  } else {
    result.record.rho_final = RealField(grid, std::vector<double>(grid.size()));
    inverse(grid, y.rho.data(), result.record.rho_final.data().data());
  }
  if (opts.track_flow) {
    result.displacement = displacement_field(grid, y);
    State scratch;
    rhs(y, scratch);
    result.v_final = compose(rhs.velocity(), FlowMap(*result.displacement));
  }
  return result;
}

}  // namespace ipm::detail
