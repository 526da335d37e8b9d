#pragma once

#include <vector>

#include "ipm/field.hpp"

namespace ipm {

enum class Integrator { rk4 };

/// Fixed-step time integration settings. The horizon is covered by
/// ceil(T / dt) equal steps, so the effective step is T / steps <= dt.
struct SolverConfig {
  double dt = 5e-3;
  double T = 1.0;
  Integrator integrator = Integrator::rk4;
  bool dealias = true;
  /// Abort when max|u| * dt * n / L exceeds this.
  double cfl_guard = 0.5;
  /// Abort when ||rho||_s grows beyond this multiple of its initial value.
  double blowup_factor = 1e3;
  /// Integrate backwards in time.
  bool reverse = false;

  void validate() const;
  int step_count() const;
  double effective_dt() const;
};

struct StepDiagnostics {
  double time = 0.0;
  double mean = 0.0;
  double l2 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double hs = 0.0;
};

struct SolutionRecord {
  RealField rho_final;
  std::vector<StepDiagnostics> diagnostics;  // steps + 1 entries
  int steps = 0;
};

/// -(u . grad) rho with u the Darcy velocity of rho.
RealField rhs_eulerian(const RealField& rho, bool dealias = true);

/// RK4 solve of the transport equation with Darcy-coupled velocity.
/// Throws SolverAbort on CFL, blow-up or non-finite state.
SolutionRecord solve_density(const RealField& rho0, const SolverConfig& cfg);

/// rho(T); T = 0 returns rho0 unchanged.
RealField solution_map(const RealField& rho0, double T, SolverConfig cfg);

}  // namespace ipm
