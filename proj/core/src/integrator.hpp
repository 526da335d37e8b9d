#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ipm/lagrangian.hpp"
#include "ipm/transport.hpp"

namespace ipm::detail {

struct CoupledOptions {
  bool track_flow = false;
  std::span<const int> snapshot_steps;  // requires track_flow
  std::span<const Point> particles;
  int particle_stride = 1;
};

struct CoupledResult {
  SolutionRecord record;
  std::optional<VectorField> displacement;
  std::optional<VectorField> v_final;
  std::vector<FlowSnapshot> snapshots;
  std::vector<double> particle_times;
  std::vector<std::vector<Point>> particle_history;  // [sample][particle]
};

/// One RK4 clock for rho (spectral state), the flow displacement and
/// particle positions. The density path is identical whatever else is
/// tracked.
CoupledResult integrate(const RealField& rho0, const SolverConfig& cfg,
                        const CoupledOptions& opts);

}  // namespace ipm::detail
