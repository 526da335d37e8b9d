#pragma once

#include "ipm/field.hpp"

namespace ipm {

class FlowMap;
struct SolverConfig;
struct InversionOptions;

/// Throws ValidationError unless |mean(rho)| * L <= 1e-12 * ||rho||_0.
void require_mean_zero(const RealField& rho, const char* what);

/// Darcy velocity u = (-R1 R2 rho, R1^2 rho); symbols xi1 xi2 / |xi|^2 and
/// -xi1^2 / |xi|^2. Requires mean-zero rho.
VectorField darcy_velocity(const RealField& rho);

/// Pressure p = (-Delta)^{-1} d2 rho, mean zero.
RealField pressure(const RealField& rho);

/// Darcy's law in its original form, -grad p - (0, rho). Independent of
/// darcy_velocity; used to cross-check it.
VectorField darcy_from_pressure(const RealField& rho);

/// Spectral divergence.
RealField divergence(const VectorField& w);

/// w1 d1 f + w2 d2 f with spectral derivatives and a 2/3-rule dealiased
/// product.
RealField advect(const VectorField& w, const RealField& f);

/// R_j R_k f, symbol -xi_j xi_k / |xi|^2.
RealField riesz_pair(const RealField& f, Axis j, Axis k);

/// [w . grad, R_j R_k] f = (w . grad)(R_j R_k f) - R_j R_k ((w . grad) f).
/// Constants are annihilated, so the mean of f does not matter.
RealField commutator(const VectorField& w, Axis j, Axis k, const RealField& f);

/// Eulerian commutator pair ([w.grad, -R1 R2] rho, [w.grad, R1^2] rho).
VectorField commutator_pair(const VectorField& w, const RealField& rho);

/// Lagrangian acceleration F(phi, v, rho0): the commutator pair evaluated
/// with w = v o phi^{-1} and rho = rho0 o phi^{-1}, composed back with phi.
/// Throws InversionError if phi cannot be inverted.
VectorField rhs_F(const FlowMap& phi, const VectorField& v, const RealField& rho0);

/// Central difference (Psi(base + eps dir) - Psi(base - eps dir)) / (2 eps)
/// of the time-one flow map, as a displacement field.
VectorField linearized_psi(const RealField& base, const RealField& direction, double eps,
                           const SolverConfig& cfg);

struct LinearizedPsi {
  VectorField coarse;        // step eps
  VectorField fine;          // step eps / 2
  VectorField extrapolated;  // (4 fine - coarse) / 3
  double eps;
};

/// linearized_psi at eps and eps/2 plus Richardson extrapolation. A
/// non-positive eps selects the default 1e-3 / ||dir||_s.
LinearizedPsi linearized_psi_richardson(const RealField& base, const RealField& direction,
                                        double eps, const SolverConfig& cfg);

}  // namespace ipm
