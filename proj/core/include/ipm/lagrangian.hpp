#pragma once

#include <span>
#include <vector>

#include "ipm/field.hpp"
#include "ipm/interpolation.hpp"
#include "ipm/transport.hpp"

namespace ipm {

/// Diffeomorphism phi = id + g of the periodic box, stored through its
/// displacement g sampled on the lattice.
class FlowMap {
 public:
  explicit FlowMap(VectorField displacement)
      : g_(std::move(displacement)), interp_(g_.c1(), g_.c2()) {}

  static FlowMap identity(const Grid& grid);
  static FlowMap translation(const Grid& grid, Point a);

  const Grid& grid() const noexcept { return g_.grid(); }
  const VectorField& displacement() const noexcept { return g_; }

  /// phi(x) with the displacement interpolated off-lattice.
  Point operator()(Point x) const;
  Point displacement_at(Point x) const { return interp_(x); }
  /// phi at lattice node (i, j), exact.
  Point at_node(int i, int j) const;

  /// det(d phi) with spectral derivatives of g.
  RealField jacobian_determinant() const;
  /// sup over nodes of the operator norm of d phi = I + dg.
  double lipschitz_bound() const;
  /// sup over nodes of the operator norm of dg.
  double max_displacement_gradient() const;

 private:
  VectorField g_;
  PairInterpolator interp_;
};

struct InversionOptions {
  double tolerance = 1e-10;
  int max_iterations = 100;
};

/// f o phi, sampled on the lattice via bicubic interpolation.
RealField compose(const RealField& f, const FlowMap& phi);
VectorField compose(const VectorField& f, const FlowMap& phi);

/// psi = phi^{-1} by the fixed point h <- -g(x + h) on the inverse
/// displacement h. Stops once sup |h_{m+1} - h_m| <= tolerance. Throws
/// InversionError when the iteration stalls or runs out of iterations.
FlowMap invert_flow_map(const FlowMap& phi, const InversionOptions& opts = {});

/// sup over nodes of |phi(psi(x)) - x| (minimal image).
double composition_defect(const FlowMap& phi, const FlowMap& psi);

struct FlowSnapshot {
  int step = 0;
  double time = 0.0;
  FlowMap phi;
  VectorField v;
};

struct FlowSolution {
  FlowMap phi;
  VectorField v;  // u(T) o phi(T)
  SolutionRecord record;
  std::vector<FlowSnapshot> snapshots;
};

/// Co-evolves the Eulerian density and the flow displacement,
/// g' = u o (id + g), on one RK4 clock. `snapshot_steps` lists step indices
/// (0..steps) at which (phi, v) is recorded. Throws SolverAbort as
/// solve_density, and when det(d phi) <= 0.
FlowSolution solve_flow(const RealField& rho0, const SolverConfig& cfg,
                        std::span<const int> snapshot_steps = {});

/// rho0 o phi^{-1}.
RealField reconstruct_density(const RealField& rho0, const FlowMap& phi,
                              const InversionOptions& opts = {});

/// Time-one flow map Psi(rho0) = phi(1; rho0). The horizon in cfg is
/// ignored.
FlowMap psi_map(const RealField& rho0, SolverConfig cfg);

struct Trajectory {
  Point x0;
  std::vector<double> times;
  std::vector<Point> positions;  // unwrapped coordinates
};

/// Particle paths x' = u(x) integrated on the same RK4 clock as the density,
/// recorded every `sample_stride` steps (the final time is always recorded).
std::vector<Trajectory> trace_trajectories(std::span<const Point> starts, const RealField& rho0,
                                           const SolverConfig& cfg, int sample_stride = 1);
Trajectory trace_trajectory(Point x0, const RealField& rho0, const SolverConfig& cfg,
                            int sample_stride = 1);

struct AnalyticityReport {
  /// Chebyshev coefficients on [t0, t1] per coordinate.
  std::vector<double> coefficients1;
  std::vector<double> coefficients2;
  /// Least-squares slope of log|c_k| against k over the fitted range
  /// (k >= 2 up to the last coefficient above 100 x noise floor), worst
  /// coordinate.
  double decay_rate = 0.0;
  /// R^2 of that fit, worst coordinate.
  double fit_quality = 1.0;
  /// Number of coefficients above 100 x noise floor, worst coordinate.
  int resolved_terms = 0;
  double noise_floor = 0.0;
  /// No coordinate has three resolved terms beyond c_1 to fit (constant or nearly
  /// polynomial path).
  bool machine_floor_tail = false;
};

/// Chebyshev expansion of a uniformly sampled trajectory by least squares
/// and a geometric-decay fit of its coefficients. Requires >= 64 samples.
AnalyticityReport analyticity_probe(const Trajectory& traj);

}  // namespace ipm
