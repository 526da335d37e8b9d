#include "ipm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fmt/format.h>
#include <random>
#include <thread>

#include "ipm/error.hpp"
#include "ipm/interpolation.hpp"
#include "ipm/lagrangian.hpp"
#include "ipm/operators.hpp"
#include "ipm/spectral.hpp"

namespace ipm {
namespace {

double bump_profile(Point d, double r) {
  const double q = (d.x1 * d.x1 + d.x2 * d.x2) / (r * r);
  return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
}

double min_cloud_distance(std::span<const Point> a, std::span<const Point> b, double box) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : a) {
    for (const Point& q : b) best = std::min(best, periodic_distance(p, q, box));
  }
  return best;
}

std::vector<Point> push_forward(const FlowMap& phi, std::span<const Point> nodes) {
  const Grid& g = phi.grid();
  std::vector<Point> out;
  out.reserve(nodes.size());
  for (const Point& x : nodes) {
    const int i = static_cast<int>(std::lround(x.x1 / g.dx1()));
    const int j = static_cast<int>(std::lround(x.x2 / g.dx2()));
    out.push_back(phi.at_node(i, j));
  }
  return out;
}

std::vector<Point> nodes_in_ball(const Grid& g, Point c, double r) {
  std::vector<Point> out;
  for (int i = 0; i < g.n1(); ++i) {
    for (int j = 0; j < g.n2(); ++j) {
      const Point x = g.node(i, j);
      if (periodic_distance(x, c, g.box_length()) <= r) out.push_back(x);
    }
  }
  return out;
}

Point interpolate(const VectorField& f, Point x) { return PairInterpolator(f.c1(), f.c2())(x); }

SolverConfig with_time(SolverConfig cfg, double T) {
  cfg.T = T;
  return cfg;
}

}  // namespace

RealField make_bump(const Grid& grid, const BumpSpec& spec) {
  if (!(spec.radius > 0.0)) throw ValidationError("bump radius must be positive");
  if (!(spec.target_norm > 0.0)) throw ValidationError("bump target_norm must be positive");
  if (!(spec.s >= 0.0)) throw ValidationError("bump s must be nonnegative");
  const double L = grid.box_length();
  const double lo = 0.25 * L;
  const double hi = 0.75 * L;
  for (double c : {spec.center.x1, spec.center.x2}) {
    if (c - spec.radius < lo || c + spec.radius > hi) {
      throw ValidationError(fmt::format(
          "bump at ({}, {}) with radius {} comes within L/4 = {} of the periodic seam",
          spec.center.x1, spec.center.x2, spec.radius, lo));
    }
  }
  const Point anti{spec.center.x1 + 0.5 * L, spec.center.x2 + 0.5 * L};
  RealField f = RealField::from_function(grid, [&](Point x) {
    return bump_profile(periodic_difference(x, spec.center, L), spec.radius) -
           bump_profile(periodic_difference(x, anti, L), spec.radius);
  });
  const double norm = sobolev_norm(f, spec.s);
  if (!(norm > 0.0)) {
    throw ValidationError(fmt::format("bump radius {} contains no lattice node (dx = {})",
                                      spec.radius, grid.dx1()));
  }
  f *= spec.target_norm / norm;
  return f;
}

RealField random_smooth_field(const Grid& grid, unsigned seed, int kmax, double amplitude) {
  if (kmax < 1 || 3 * kmax > std::min(grid.n1(), grid.n2())) {
    throw ValidationError("random field modes must lie in [1, n/3]");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField F(grid);
  const double N = static_cast<double>(grid.size());
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = 0; k2 <= kmax; ++k2) {
      if (k2 == 0 && k1 <= 0) continue;
      const double amp = std::exp(-0.5 * std::hypot(k1, k2));
      const std::complex<double> v(amp * gauss(rng), amp * gauss(rng));
      const int i = k1 < 0 ? k1 + grid.n1() : k1;
      F(i, k2) = 0.5 * N * v;
      if (k2 == 0) {
        const int im = k1 > 0 ? grid.n1() - k1 : -k1;
        F(im, 0) = 0.5 * N * std::conj(v);
      }
    }
  }
  RealField f = inverse_transform(F);
  f *= amplitude / f.max_abs();
  return f;
}

RealField make_datum(const Grid& grid, const DatumSpec& spec) {
  const double L = grid.box_length();
  switch (spec.kind) {
    case DatumKind::gaussian: {
      if (!(spec.radius > 0.0)) throw ValidationError("datum radius must be positive");
      const Point anti{spec.center.x1 + 0.5 * L, spec.center.x2 + 0.5 * L};
      const double w2 = 2.0 * spec.radius * spec.radius;
      RealField f = RealField::from_function(grid, [&](Point x) {
        const Point a = periodic_difference(x, spec.center, L);
        const Point b = periodic_difference(x, anti, L);
        return spec.amplitude * (std::exp(-(a.x1 * a.x1 + a.x2 * a.x2) / w2) -
                                 std::exp(-(b.x1 * b.x1 + b.x2 * b.x2) / w2));
      });
      return remove_mean(f);
    }
    case DatumKind::bump:
      return make_bump(grid, {spec.center, spec.radius, spec.amplitude, grid.s()});
    case DatumKind::stratified:
      return RealField::from_function(grid, [&](Point x) {
        return spec.amplitude * std::sin(2.0 * M_PI * x.x2 / L);
      });
    case DatumKind::random:
      return random_smooth_field(grid, spec.seed, spec.modes, spec.amplitude);
  }
  throw ValidationError("unknown datum kind");
}

std::vector<Point> lattice_support(const RealField& f, double rel_threshold) {
  const double cut = rel_threshold * f.max_abs();
  std::vector<Point> out;
  if (f.max_abs() == 0.0) return out;
  const Grid& g = f.grid();
  for (int i = 0; i < g.n1(); ++i) {
    for (int j = 0; j < g.n2(); ++j) {
      if (std::abs(f(i, j)) > cut) out.push_back(g.node(i, j));
    }
  }
  return out;
}

double scaling_check(const RealField& rho0, double T, double lambda, const SolverConfig& cfg,
                     StepMatching matching) {
  if (!(lambda > 0.0)) throw ValidationError("scaling_check: lambda must be positive");
  if (!(T > 0.0)) throw ValidationError("scaling_check: T must be positive");
  const double norm0 = sobolev_norm(rho0, rho0.grid().s());
  if (norm0 == 0.0) return 0.0;
  SolverConfig left = with_time(cfg, lambda * T);
  SolverConfig right = with_time(cfg, T);
  if (matching == StepMatching::matched) {
    right.dt = T / left.step_count();
  }
  const RealField a = solve_density(rho0, left).rho_final;
  const RealField b = solve_density(lambda * rho0, right).rho_final;
  return sobolev_norm(a - (1.0 / lambda) * b, rho0.grid().s()) / norm0;
}

Constants estimate_constants(const RealField& rho_bullet, const RealField& rho_bar, Point xstar,
                             const SolverConfig& cfg, double eps) {
  require_same_lattice(rho_bullet.grid(), rho_bar.grid(), "estimate_constants");
  const Grid& grid = rho_bar.grid();
  const double s = grid.s();
  Constants c;

  const LinearizedPsi lin = linearized_psi_richardson(rho_bullet, rho_bar, eps, cfg);
  c.m = norm(interpolate(lin.extrapolated, xstar));
  if (!(c.m >= 1e-8)) {
    throw ValidationError(fmt::format(
        "m = {:.3e} is below 1e-8: choose a different rho_bar or x*", c.m));
  }

  const FlowMap phi_bullet = psi_map(rho_bullet, cfg);
  const FlowMap phi_bar = psi_map(rho_bullet + rho_bar, cfg);
  c.L = 1.1 * (1.0 + std::max(phi_bullet.max_displacement_gradient(),
                              phi_bar.max_displacement_gradient()));

  const std::vector<Point> supp = lattice_support(rho_bullet);
  if (!supp.empty()) {
    std::vector<Point> ball = push_forward(phi_bullet, nodes_in_ball(grid, xstar, 1.0));
    ball.push_back(phi_bullet(xstar));
    c.d = min_cloud_distance(push_forward(phi_bullet, supp), ball, grid.box_length());
  }

  // Sobolev embedding constant over the corpus.
  std::vector<RealField> corpus;
  auto add = [&](const RealField& f) {
    if (f.max_abs() > 0.0) corpus.push_back(f);
  };
  add(rho_bullet);
  add(rho_bar);
  add(phi_bullet.displacement().c1());
  add(phi_bullet.displacement().c2());
  add(lin.extrapolated.c1());
  add(lin.extrapolated.c2());
  const double L = grid.box_length();
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    const double rr = std::max(r, 2.0 * grid.dx1());
    add(make_bump(grid, {{0.5 * L, 0.5 * L}, std::min(rr, 0.2 * L), 1.0, s}));
  }
  for (const RealField& f : corpus) {
    c.c_tilde = std::max(c.c_tilde, c1_norm(f) / sobolev_norm(f, s));
  }
  c.c_tilde *= 1.1;
  return c;
}

void Prop3Config::validate() const {
  solver.validate();
  if (!(R > 0.0)) throw ValidationError("R must be positive");
  if (N < 4) throw ValidationError("N must be at least 4");
  if (threads < 1) throw ValidationError("threads must be at least 1");
  if (!(rho_bar.target_norm > 0.0)) throw ValidationError("rho_bar norm must be positive");
  const double L = grid.box_length();
  if (xstar.x1 < 0.25 * L || xstar.x1 > 0.75 * L || xstar.x2 < 0.25 * L || xstar.x2 > 0.75 * L) {
    throw ValidationError("xstar must keep L/4 from the periodic seam");
  }
}

bool Prop3Record::passes() const {
  return !failed && disjoint && flow_sep >= 0.5 * sep_bound && above_floor;
}

std::string Prop3Record::verdict() const {
  if (failed) return "failed";
  if (!disjoint) return "overlap";
  if (flow_sep < 0.5 * sep_bound) return "weak_separation";
  if (!above_floor) return "below_floor";
  return "pass";
}

ExperimentReport run_prop3(const Prop3Config& cfg) {
  cfg.validate();
  const Grid& grid = cfg.grid;
  const double s = grid.s();
  const double box = grid.box_length();
  SolverConfig solver = cfg.solver;
  solver.T = 1.0;

  const RealField rho_bullet =
      cfg.rho_bullet.target_norm > 0.0 ? make_bump(grid, cfg.rho_bullet) : RealField(grid);
  const RealField rho_bar = make_bump(grid, cfg.rho_bar);
  const std::vector<Point> supp_bullet = lattice_support(rho_bullet);
  for (const Point& p : supp_bullet) {
    if (periodic_distance(p, cfg.xstar, box) <= 2.0) {
      throw ValidationError("dist(x*, supp rho_bullet) must exceed 2");
    }
  }

  ExperimentReport report;
  report.constants = estimate_constants(rho_bullet, rho_bar, cfg.xstar, solver, cfg.eps);
  report.rho_bar_norm = sobolev_norm(rho_bar, s);
  const Constants& K = report.constants;
  const FlowMap phi_bullet = psi_map(rho_bullet, solver);
  const double cell = std::max(grid.dx1(), grid.dx2());

  report.records.resize(cfg.N);
  auto run_one = [&](int n) {
    Prop3Record& rec = report.records[n - 1];
    rec.n = n;
    rec.r_n = K.m / (8.0 * n * K.L);
    rec.sep_bound = K.m / (2.0 * n);
    try {
      const RealField w = make_bump(grid, {cfg.xstar, rec.r_n, 0.5 * cfg.R, s});
      const RealField dbar = (1.0 / n) * rho_bar;
      rec.input_dist = sobolev_norm(dbar, s);
      const RealField rho0 = rho_bullet + w;
      const RealField rho0t = rho0 + dbar;
      const FlowSolution a = solve_flow(rho0, solver);
      const FlowSolution b = solve_flow(rho0t, solver);
      rec.diagnostics = a.record.diagnostics;
      rec.diagnostics_tilde = b.record.diagnostics;
      rec.output_dist = sobolev_norm(a.record.rho_final - b.record.rho_final, s);
      rec.flow_sep = norm(b.phi.displacement_at(cfg.xstar) - a.phi.displacement_at(cfg.xstar));

      const std::vector<Point> supp_w = lattice_support(w);
      const std::vector<Point> core_w = nodes_in_ball(grid, cfg.xstar, rec.r_n);
      rec.disjoint = true;
      rec.contained = true;
      rec.support_gap = std::numeric_limits<double>::infinity();
      for (const FlowMap* phi : {&a.phi, &b.phi}) {
        const double gap = min_cloud_distance(push_forward(*phi, supp_bullet),
                                              push_forward(*phi, supp_w), box);
        rec.support_gap = std::min(rec.support_gap, gap);
        if (!(gap > std::sqrt(2.0) * K.L * cell)) rec.disjoint = false;
        const Point centre = (*phi)(cfg.xstar);
        for (const Point& y : push_forward(*phi, core_w)) {
          if (periodic_distance(y, centre, box) > K.L * rec.r_n + 2.0 * cell) rec.contained = false;
        }
      }
      double drift = 0.0;
      const VectorField diff = a.phi.displacement() - phi_bullet.displacement();
      for (std::size_t k = 0; k < grid.size(); ++k) drift = std::max(drift, norm(diff.at(k)));
      rec.drift = drift;
    } catch (const SolverAbort& e) {
      rec.failed = true;
      rec.failure = e.what();
    } catch (const InversionError& e) {
      rec.failed = true;
      rec.failure = e.what();
    } catch (const ValidationError& e) {
      rec.failed = true;
      rec.failure = e.what();
    }
  };

  const int workers = std::min(cfg.threads, cfg.N);
  if (workers <= 1) {
    for (int n = 1; n <= cfg.N; ++n) run_one(n);
  } else {
    std::atomic<int> next{1};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int n = next++; n <= cfg.N; n = next++) run_one(n);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Verdicts over the finished records.
  auto& recs = report.records;
  report.input_exact = true;
  report.separation = true;
  report.disjoint = true;
  for (const auto& r : recs) {
    if (r.failed) {
      report.input_exact = report.separation = report.disjoint = false;
      continue;
    }
    if (std::abs(r.input_dist * r.n - report.rho_bar_norm) > 1e-14 * report.rho_bar_norm * r.n) {
      report.input_exact = false;
    }
    if (r.flow_sep < 0.5 * r.sep_bound) report.separation = false;
    if (!r.disjoint) report.disjoint = false;
  }
  report.output_floor = !recs.front().failed && recs.front().output_dist > 0.0;
  for (auto& r : recs) {
    r.above_floor = !r.failed && !recs.front().failed &&
                    r.output_dist >= 0.5 * recs.front().output_dist;
    if (!r.above_floor) report.output_floor = false;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& r : recs) {
    if (r.failed || !(r.flow_sep > 0.0)) continue;
    const double x = std::log(double(r.n));
    const double y = std::log(r.flow_sep);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++cnt;
  }
  report.separation_slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
  return report;
}

double ConsistencyResult::order(std::size_t i) const {
  if (i + 1 >= residual.size() || residual[i] <= 0.0 || residual[i + 1] <= 0.0) return 0.0;
  return std::log(residual[i + 1] / residual[i]) / std::log(h[i + 1] / h[i]);
}

ConsistencyResult commutator_consistency(const RealField& rho0, const SolverConfig& cfg,
                                         std::span<const int> h_steps) {
  cfg.validate();
  const int steps = cfg.step_count();
  const double dt = cfg.effective_dt();
  int kmax = 0;
  for (int k : h_steps) {
    if (k < 1) throw ValidationError("commutator_consistency: h steps must be >= 1");
    kmax = std::max(kmax, k);
  }
  // Three interior centres, far enough from both ends for every spacing.
  std::vector<int> centres;
  for (int q = 1; q <= 3; ++q) {
    const int c = (q * steps) / 4;
    if (c - kmax >= 0 && c + kmax <= steps) centres.push_back(c);
  }
  if (centres.empty()) {
    throw ValidationError("commutator_consistency: T too short for the requested spacings");
  }
  std::vector<int> wanted;
  for (int c : centres) {
    wanted.push_back(c);
    for (int k : h_steps) {
      wanted.push_back(c - k);
      wanted.push_back(c + k);
    }
  }
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  const FlowSolution sol = solve_flow(rho0, cfg, wanted);
  auto snap = [&](int step) -> const FlowSnapshot& {
    for (const auto& sn : sol.snapshots) {
      if (sn.step == step) return sn;
    }
    throw ValidationError("commutator_consistency: missing snapshot");
  };

  ConsistencyResult out;
  std::vector<VectorField> rhs;
  for (int c : centres) {
    const FlowSnapshot& sn = snap(c);
    rhs.push_back(rhs_F(sn.phi, sn.v, rho0));
    out.scale = std::max(out.scale, rhs.back().l2_norm());
  }
  for (int k : h_steps) {
    const double h = k * dt;
    double worst = 0.0;
    for (std::size_t q = 0; q < centres.size(); ++q) {
      const VectorField fd = (0.5 / h) * (snap(centres[q] + k).v - snap(centres[q] - k).v);
      worst = std::max(worst, (fd - rhs[q]).l2_norm());
    }
    out.h_steps.push_back(k);
    out.h.push_back(h);
    out.residual.push_back(out.scale > 0.0 ? worst / out.scale : 0.0);
  }
  return out;
}

}  // namespace ipm
