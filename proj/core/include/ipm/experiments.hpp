#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ipm/field.hpp"
#include "ipm/transport.hpp"

namespace ipm {

struct BumpSpec {
  Point center;
  double radius = 1.0;
  double target_norm = 1.0;
  double s = 2.5;
};

/// exp(1 - 1/(1 - |x-c|^2/r^2)) on B_r(c) minus the same profile at the
/// antipodal point c + (L/2, L/2), scaled to the target H^s norm. The ball
/// must keep L/4 from the periodic seam and contain at least one node.
RealField make_bump(const Grid& grid, const BumpSpec& spec);

enum class DatumKind { gaussian, bump, stratified, random };

/// Initial data for the single-run commands.
///   gaussian:   periodized Gaussian of width `radius` at `center` minus its
///               antipodal copy, peak `amplitude`
///   bump:       make_bump with target norm `amplitude`
///   stratified: amplitude * sin(2 pi x2 / L)
///   random:     random_smooth_field(seed, modes, amplitude)
struct DatumSpec {
  DatumKind kind = DatumKind::gaussian;
  Point center{10.0, 12.0};
  double radius = 2.0;
  double amplitude = 1.0;
  int modes = 12;
  unsigned seed = 1;
};

RealField make_datum(const Grid& grid, const DatumSpec& spec);

/// Mean-zero real field with random Fourier modes |k_i| <= kmax, amplitudes
/// decaying like exp(-|k|/2), rescaled to max|f| = amplitude. Deterministic
/// for a given seed.
RealField random_smooth_field(const Grid& grid, unsigned seed, int kmax, double amplitude = 1.0);

/// Lattice nodes where |f| exceeds rel_threshold * max|f|.
std::vector<Point> lattice_support(const RealField& f, double rel_threshold = 1e-12);

enum class StepMatching {
  matched,    // both sides take the same number of steps
  common_dt,  // both sides use cfg.dt
};

/// ||Phi_{lambda T}(rho0) - Phi_T(lambda rho0) / lambda||_s / ||rho0||_s.
double scaling_check(const RealField& rho0, double T, double lambda, const SolverConfig& cfg,
                     StepMatching matching = StepMatching::matched);

struct Constants {
  double m = 0.0;
  double L = 1.0;
  double d = std::numeric_limits<double>::infinity();
  double c_tilde = 0.0;
};

/// Measures m, L, d and C~ on the discrete corpus. eps <= 0 picks the
/// default linearization step. Throws ValidationError when m < 1e-8.
Constants estimate_constants(const RealField& rho_bullet, const RealField& rho_bar, Point xstar,
                             const SolverConfig& cfg, double eps = 0.0);

struct Prop3Config {
  Grid grid = Grid::square(256);
  SolverConfig solver;
  double R = 0.1;
  int N = 8;
  /// target_norm <= 0 means rho_bullet = 0.
  BumpSpec rho_bullet{{12.0, 20.0}, 3.0, 0.05, 2.5};
  Point xstar{20.0, 12.0};
  BumpSpec rho_bar{{20.0, 12.0}, 4.0, 0.05, 2.5};
  double eps = 0.0;
  int threads = 1;

  void validate() const;
};

struct Prop3Record {
  int n = 0;
  double r_n = 0.0;
  double input_dist = 0.0;
  double output_dist = 0.0;
  double flow_sep = 0.0;
  double sep_bound = 0.0;
  bool disjoint = false;
  bool contained = false;
  bool above_floor = true;   // output_dist >= 50% of its n = 1 value
  double support_gap = 0.0;  // min distance, transported rho_bullet vs w_n pieces
  double drift = 0.0;        // max |phi^(n) - phi_bullet| over the lattice
  bool failed = false;
  std::string failure;
  std::vector<StepDiagnostics> diagnostics;
  std::vector<StepDiagnostics> diagnostics_tilde;

  bool passes() const;
  std::string verdict() const;
};

struct ExperimentReport {
  Constants constants;
  double rho_bar_norm = 0.0;
  std::vector<Prop3Record> records;
  bool input_exact = false;
  bool output_floor = false;
  bool separation = false;
  bool disjoint = false;
  double separation_slope = 0.0;

  bool passed() const { return input_exact && output_floor && separation && disjoint; }
};

/// Builds rho_bullet, rho_bar and the w_n sequence from cfg and runs the
/// non-uniform dependence construction for n = 1..N.
ExperimentReport run_prop3(const Prop3Config& cfg);

struct ConsistencyResult {
  std::vector<int> h_steps;
  std::vector<double> h;
  std::vector<double> residual;
  double scale = 0.0;  // max ||rhs_F||_0 over the centers

  /// log2(residual[i+1] / residual[i]) / log2(h[i+1] / h[i]) for the pair i.
  double order(std::size_t i) const;
};

/// Centered difference of v = phi_t against rhs_F at interior times, for
/// each spacing h = k dt in h_steps.
ConsistencyResult commutator_consistency(const RealField& rho0, const SolverConfig& cfg,
                                         std::span<const int> h_steps);

}  // namespace ipm
