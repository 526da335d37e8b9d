#pragma once

#include <string>
#include <string_view>

#include "ipm/experiments.hpp"
#include "ipm/transport.hpp"

namespace ipm {

struct Prop3Params {
  double R = 0.1;
  int N = 8;
  double eps = 0.0;
  BumpSpec rho_bullet{{12.0, 20.0}, 3.0, 0.05, 2.5};
  Point xstar{20.0, 12.0};
  BumpSpec rho_bar{{20.0, 12.0}, 4.0, 0.05, 2.5};

  bool operator==(const Prop3Params&) const = default;
};

struct TrajectoryParams {
  int count = 10;
  double ring_radius = 3.0;  // starts on a ring around datum.center
  int stride = 1;

  bool operator==(const TrajectoryParams&) const = default;
};

struct ScalingParams {
  double lambda = 2.0;
  double T = 0.5;

  bool operator==(const ScalingParams&) const = default;
};

struct RunConfig {
  int n = 256;
  double box = 32.0;
  double s = 2.5;
  SolverConfig solver;
  DatumSpec datum;
  Prop3Params prop3;
  TrajectoryParams trajectory;
  ScalingParams scaling;

  Grid grid() const;
  Prop3Config prop3_config(int threads = 1) const;
  void validate() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses a flat key-value document:
///
///   # comment
///   [solver]
///   dt = 5e-3
///
/// Keys may also be written as section.key, or bare when the name is unique.
/// Missing keys keep their defaults. Unknown keys, malformed values and
/// invariant violations throw ValidationError naming the key.
RunConfig parse_config(std::string_view text);

/// Canonical document listing every key; parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& cfg);

}  // namespace ipm
