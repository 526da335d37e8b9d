// ipmlab: batch driver for the IPM spectral lab.
//
// Exit codes: 0 success, 1 validation failure, 2 solver abort, 3 I/O.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ipm/config.hpp"
#include "ipm/error.hpp"
#include "ipm/experiments.hpp"
#include "ipm/lagrangian.hpp"
#include "ipm/operators.hpp"
#include "ipm/report.hpp"
#include "ipm/snapshot.hpp"
#include "ipm/spectral.hpp"

namespace fs = std::filesystem;
using namespace ipm;

namespace {

enum Exit { kOk = 0, kValidation = 1, kSolver = 2, kIo = 3 };

struct Options {
  std::string config;
  std::string out;
  std::string input;
  bool force = false;
  int threads = 1;
};

struct Context {
  std::string command;
  RunConfig cfg;
  fs::path out;
  bool force = false;
  int threads = 1;
  std::string input;

  fs::path file(const char* name) const { return out / name; }
  void text(const char* name, const std::string& body) const { write_text(file(name), body, force); }
  void snapshot(const char* name, const RealField& f, double t) const {
    write_snapshot(f, t, file(name), force);
  }
};

RunConfig load_config(const std::string& path) {
  if (path.empty()) return parse_config("");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read config {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RealField initial_datum(const Context& ctx) {
  const Grid grid = ctx.cfg.grid();
  if (!ctx.input.empty()) return read_snapshot(ctx.input, grid).field;
  return make_datum(grid, ctx.cfg.datum);
}

std::vector<Point> ring_starts(const RunConfig& cfg) {
  std::vector<Point> starts;
  const int count = cfg.trajectory.count;
  for (int k = 0; k < count; ++k) {
    const double a = 2.0 * std::numbers::pi * k / count;
    starts.push_back({cfg.datum.center.x1 + cfg.trajectory.ring_radius * std::cos(a),
                      cfg.datum.center.x2 + cfg.trajectory.ring_radius * std::sin(a)});
  }
  return starts;
}

int cmd_darcy(const Context& ctx) {
  const RealField rho = initial_datum(ctx);
  const VectorField u = darcy_velocity(rho);
  const RealField p = pressure(rho);
  const VectorField alt = darcy_from_pressure(rho);
  const double umax = u.max_norm();
  const double form = (u - alt).max_norm() / std::max(umax, 1e-300);
  const double div = divergence(u).max_abs();
  ctx.snapshot("rho.ipm", rho, 0.0);
  ctx.snapshot("u1.ipm", u.c1(), 0.0);
  ctx.snapshot("u2.ipm", u.c2(), 0.0);
  ctx.snapshot("p.ipm", p, 0.0);
  ctx.text("darcy.csv", fmt::format("max_u,max_div,form_defect,hs_rho\n{},{},{},{}\n",
                                    csv_number(umax), csv_number(div), csv_number(form),
                                    csv_number(sobolev_norm(rho, rho.grid().s()))));
  fmt::print("darcy: max|u| = {:.6g}, max|div u| = {:.3e}, form defect = {:.3e}\n", umax, div, form);
  return kOk;
}

int cmd_solve(const Context& ctx) {
  const RealField rho0 = initial_datum(ctx);
  const SolutionRecord rec = solve_density(rho0, ctx.cfg.solver);
  ctx.snapshot("rho_final.ipm", rec.rho_final, ctx.cfg.solver.T);
  ctx.text("diagnostics.csv", diagnostics_csv(rec.diagnostics));
  const auto& a = rec.diagnostics.front();
  const auto& b = rec.diagnostics.back();
  fmt::print("solve: {} steps, H^s {:.6g} -> {:.6g}, L2 drift {:.3e}\n", rec.steps, a.hs, b.hs,
             std::abs(b.l2 - a.l2) / std::max(a.l2, 1e-300));
  return kOk;
}

int cmd_flow(const Context& ctx) {
  const RealField rho0 = initial_datum(ctx);
  const FlowSolution sol = solve_flow(rho0, ctx.cfg.solver);
  const double s = rho0.grid().s();
  const RealField lag = reconstruct_density(rho0, sol.phi);
  const double norm0 = sobolev_norm(rho0, s);
  const double recon = sobolev_norm(lag - sol.record.rho_final, s) / std::max(norm0, 1e-300);
  const RealField det = sol.phi.jacobian_determinant();
  const double T = ctx.cfg.solver.T;
  ctx.snapshot("rho_final.ipm", sol.record.rho_final, T);
  ctx.snapshot("g1.ipm", sol.phi.displacement().c1(), T);
  ctx.snapshot("g2.ipm", sol.phi.displacement().c2(), T);
  ctx.snapshot("v1.ipm", sol.v.c1(), T);
  ctx.snapshot("v2.ipm", sol.v.c2(), T);
  ctx.text("diagnostics.csv", diagnostics_csv(sol.record.diagnostics));
  ctx.text("flow.csv",
           fmt::format("T,min_det,max_det,lipschitz,max_displacement,reconstruction_defect\n"
                       "{},{},{},{},{},{}\n",
                       csv_number(T), csv_number(det.min()), csv_number(det.max()),
                       csv_number(sol.phi.lipschitz_bound()),
                       csv_number(sol.phi.displacement().max_norm()), csv_number(recon)));
  fmt::print("flow: det in [{:.9f}, {:.9f}], Eulerian vs Lagrangian H^s defect {:.3e}\n",
             det.min(), det.max(), recon);
  return kOk;
}

std::vector<Trajectory> traces(const Context& ctx) {
  const RealField rho0 = initial_datum(ctx);
  const std::vector<Point> starts = ring_starts(ctx.cfg);
  return trace_trajectories(starts, rho0, ctx.cfg.solver, ctx.cfg.trajectory.stride);
}

std::string trajectories_csv(const std::vector<Trajectory>& trajs) {
  std::string out = "id,time,x1,x2\n";
  for (std::size_t id = 0; id < trajs.size(); ++id) {
    const auto& t = trajs[id];
    for (std::size_t k = 0; k < t.times.size(); ++k) {
      out += fmt::format("{},{},{},{}\n", id, csv_number(t.times[k]),
                         csv_number(t.positions[k].x1), csv_number(t.positions[k].x2));
    }
  }
  return out;
}

int cmd_trajectory(const Context& ctx) {
  const auto trajs = traces(ctx);
  ctx.text("trajectories.csv", trajectories_csv(trajs));
  fmt::print("trajectory: {} particles, {} samples each\n", trajs.size(),
             trajs.empty() ? 0 : trajs.front().times.size());
  return kOk;
}

int cmd_analyticity(const Context& ctx) {
  const auto trajs = traces(ctx);
  std::string summary =
      "id,x1,x2,decay_rate,decay_factor,fit_quality,resolved_terms,noise_floor,machine_floor_tail\n";
  std::string coeffs = "id,k,c1,c2\n";
  for (std::size_t id = 0; id < trajs.size(); ++id) {
    const AnalyticityReport r = analyticity_probe(trajs[id]);
    summary += fmt::format("{},{},{},{},{},{},{},{},{}\n", id, csv_number(trajs[id].x0.x1),
                           csv_number(trajs[id].x0.x2), csv_number(r.decay_rate),
                           csv_number(std::exp(r.decay_rate)), csv_number(r.fit_quality),
                           r.resolved_terms, csv_number(r.noise_floor), int(r.machine_floor_tail));
    for (std::size_t k = 0; k < r.coefficients1.size(); ++k) {
      coeffs += fmt::format("{},{},{},{}\n", id, k, csv_number(r.coefficients1[k]),
                            csv_number(r.coefficients2[k]));
    }
    fmt::print("analyticity: particle {} decay e^{:.3f} per index, R^2 {:.4f}, {} terms{}\n", id,
               r.decay_rate, r.fit_quality, r.resolved_terms,
               r.machine_floor_tail ? " (machine floor)" : "");
  }
  ctx.text("trajectories.csv", trajectories_csv(trajs));
  ctx.text("analyticity.csv", summary);
  ctx.text("chebyshev.csv", coeffs);
  return kOk;
}

int cmd_scaling(const Context& ctx) {
  const RealField rho0 = initial_datum(ctx);
  const double lambda = ctx.cfg.scaling.lambda;
  const double T = ctx.cfg.scaling.T;
  SolverConfig solver = ctx.cfg.solver;
  std::string out = "matching,dt,lambda,T,defect,order\n";
  const double matched = scaling_check(rho0, T, lambda, solver, StepMatching::matched);
  out += fmt::format("matched,{},{},{},{},\n", csv_number(solver.dt), csv_number(lambda),
                     csv_number(T), csv_number(matched));
  fmt::print("scaling-check: matched step counts, defect {:.3e}\n", matched);
  double prev = 0.0;
  const double dt0 = solver.dt;
  for (int k = 0; k < 3; ++k) {
    solver.dt = dt0 / (1 << k);
    const double defect = scaling_check(rho0, T, lambda, solver, StepMatching::common_dt);
    const double order = prev > 0.0 && defect > 0.0 ? std::log2(prev / defect) : 0.0;
    out += fmt::format("common_dt,{},{},{},{},{}\n", csv_number(solver.dt), csv_number(lambda),
                       csv_number(T), csv_number(defect), k == 0 ? "" : csv_number(order));
    fmt::print("scaling-check: common dt {:.3e}, defect {:.3e}{}\n", solver.dt, defect,
               k == 0 ? std::string() : fmt::format(", order {:.2f}", order));
    prev = defect;
  }
  ctx.text("scaling.csv", out);
  return kOk;
}

int cmd_prop3(const Context& ctx) {
  const ExperimentReport report = run_prop3(ctx.cfg.prop3_config(ctx.threads));
  emit_report(report, ctx.out, ctx.force);
  const Constants& c = report.constants;
  fmt::print("prop3: m = {:.6g}, L = {:.6g}, d = {:.6g}, C~ = {:.6g}\n", c.m, c.L, c.d, c.c_tilde);
  for (const auto& r : report.records) {
    fmt::print("  n={} r_n={:.3e} input={:.6g} output={:.6g} sep={:.3e} (bound {:.3e}) {}\n", r.n,
               r.r_n, r.input_dist, r.output_dist, r.flow_sep, r.sep_bound, r.verdict());
  }
  fmt::print("prop3: input_exact={} output_floor={} separation={} disjoint={}\n",
             report.input_exact, report.output_floor, report.separation, report.disjoint);
  return kOk;
}

int cmd_selftest(const Context& ctx) {
  const Grid grid(32, 32, ctx.cfg.box, ctx.cfg.s);
  int failures = 0;
  auto check = [&](const char* name, bool ok, double value) {
    fmt::print("{} {} ({:.3e})\n", ok ? "PASS" : "FAIL", name, value);
    failures += ok ? 0 : 1;
  };
  const RealField f = random_smooth_field(grid, 7, 8);
  const double rt = (inverse_transform(forward_transform(f)) - f).max_abs();
  check("transform round trip", rt < 1e-12, rt);
  const VectorField u = darcy_velocity(f);
  const double div = divergence(u).max_abs() / u.max_norm();
  check("darcy divergence", div < 1e-12, div);
  const double form = (u - darcy_from_pressure(f)).max_norm() / u.max_norm();
  check("darcy pressure form", form < 1e-12, form);
  const RealField strat = make_datum(grid, {DatumKind::stratified, {}, 1.0, 1.0, 1, 1});
  SolverConfig solver;
  solver.dt = 0.05;
  const double eq = (solution_map(strat, 1.0, solver) - strat).max_abs();
  check("stratified equilibrium", eq < 1e-12, eq);
  const fs::path tmp = ctx.out / "selftest.ipm";
  write_snapshot(f, 0.25, tmp, true);
  const Snapshot back = read_snapshot(tmp);
  fs::remove(tmp);
  check("snapshot round trip", back.field.data() == f.data() && back.time == 0.25, 0.0);
  const RunConfig echo = parse_config(echo_config(ctx.cfg));
  check("config echo", echo == ctx.cfg, 0.0);
  return failures == 0 ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral lab for the incompressible porous media equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  Options opts;
  using Handler = std::function<int(const Context&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h, bool takes_input) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output directory (default ./ipm-<command>)");
    sub->add_flag("--force", opts.force, "overwrite existing outputs");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    if (takes_input) sub->add_option("--input", opts.input, "initial datum snapshot");
    commands.emplace_back(sub, std::move(h));
  };
  add("darcy", "Darcy velocity and pressure of the datum", cmd_darcy, true);
  add("solve", "Eulerian solve to time T", cmd_solve, true);
  add("flow", "Coupled density and flow-map solve", cmd_flow, true);
  add("trajectory", "Trace particle paths", cmd_trajectory, true);
  add("scaling-check", "Time-amplitude scaling identity", cmd_scaling, true);
  add("prop3", "Non-uniform dependence construction", cmd_prop3, false);
  add("analyticity", "Chebyshev decay of particle paths", cmd_analyticity, true);
  add("selftest", "Quick internal consistency checks", cmd_selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    for (auto& [sub, handler] : commands) {
      if (!sub->parsed()) continue;
      Context ctx;
      ctx.command = sub->get_name();
      ctx.cfg = load_config(opts.config);
      ctx.out = opts.out.empty() ? fs::path("ipm-" + ctx.command) : fs::path(opts.out);
      ctx.force = opts.force;
      ctx.threads = opts.threads;
      ctx.input = opts.input;
      ensure_directory(ctx.out);
      write_manifest(ctx.out, ctx.command, ctx.cfg, ctx.force);
      return handler(ctx);
    }
  } catch (const ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const SolverAbort& e) {
    fmt::print(stderr, "solver abort: {}\n", e.what());
    return kSolver;
  } catch (const InversionError& e) {
    fmt::print(stderr, "solver abort: {}\n", e.what());
    return kSolver;
  } catch (const IoError& e) {
    fmt::print(stderr, "i/o error: {}\n", e.what());
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "i/o error: {}\n", e.what());
    return kIo;
  }
  return kValidation;
}
