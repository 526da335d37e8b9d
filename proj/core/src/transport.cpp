#include "ipm/transport.hpp"

#include <cmath>

#include "integrator.hpp"
#include "ipm/error.hpp"
#include "ipm/operators.hpp"
#include "ipm/spectral.hpp"
#include "kernels.hpp"

namespace ipm {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("T must be nonnegative");
  if (T > 0.0 && dt > T * (1.0 + 1e-12)) throw ValidationError("dt must not exceed T");
  if (!(cfl_guard > 0.0)) throw ValidationError("cfl_guard must be positive");
  if (!(blowup_factor > 1.0)) throw ValidationError("blowup_factor must exceed 1");
}

int SolverConfig::step_count() const {
  if (T == 0.0) return 0;
  return static_cast<int>(std::ceil(T / dt - 1e-9));
}

double SolverConfig::effective_dt() const {
  const int n = step_count();
  return n == 0 ? 0.0 : T / n;
}

RealField rhs_eulerian(const RealField& rho, bool dealias) {
  const VectorField u = darcy_velocity(rho);
  const Grid& grid = rho.grid();
  const detail::Spectrum rho_hat = forward_transform(rho).data();
  detail::Spectrum out;
  detail::transport_tendency(grid, rho_hat, u.c1().data().data(), u.c2().data().data(), dealias,
                             out);
  RealField r(grid);
  detail::inverse(grid, out.data(), r.data().data());
  return r;
}

SolutionRecord solve_density(const RealField& rho0, const SolverConfig& cfg) {
  return detail::integrate(rho0, cfg, {}).record;
}

RealField solution_map(const RealField& rho0, double T, SolverConfig cfg) {
  cfg.T = T;
  if (T == 0.0) {
    cfg.validate();
    return rho0;
  }
  return solve_density(rho0, cfg).rho_final;
}

}  // namespace ipm
