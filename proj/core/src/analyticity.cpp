#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ipm/error.hpp"
#include "ipm/lagrangian.hpp"

namespace ipm {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct DecayFit {
  double slope = -std::numeric_limits<double>::infinity();
  double r2 = 1.0;
  int resolved = 0;
  bool fitted = false;
};

// Fits log of the monotone tail envelope e_k = max_{j >= k} |c_j| over
// k = 2..K, where K is the last index with e_k above 100 x floor. c_0 and
// c_1 carry the position and mean drift and sit off the asymptotic line.
constexpr int kFirst = 2;
DecayFit fit_decay(const std::vector<double>& c, double floor) {
  const int n = static_cast<int>(c.size());
  std::vector<double> env(n);
  double running = 0.0;
  for (int k = n - 1; k >= 0; --k) {
    running = std::max(running, std::abs(c[k]));
    env[k] = running;
  }
  DecayFit fit;
  int last = 0;
  for (int k = 1; k < n && env[k] > 100.0 * floor; ++k) last = k;
  fit.resolved = last;
  if (last - kFirst + 1 < 3) return fit;

  const int m = last - kFirst + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = kFirst; k <= last; ++k) {
    const double y = std::log(env[k]);
    sx += k;
    sy += y;
    sxx += double(k) * k;
    sxy += k * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  const double ybar = sy / m;
  double ss_res = 0, ss_tot = 0;
  for (int k = kFirst; k <= last; ++k) {
    const double y = std::log(env[k]);
    const double r = y - (intercept + slope * k);
    ss_res += r * r;
    ss_tot += (y - ybar) * (y - ybar);
  }
  fit.slope = slope;
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.fitted = true;
  return fit;
}

}  // namespace

AnalyticityReport analyticity_probe(const Trajectory& traj) {
  const int m = static_cast<int>(traj.times.size());
  if (m < 64 || traj.positions.size() != traj.times.size()) {
    throw ValidationError("analyticity_probe: need at least 64 uniform samples, got " +
                          std::to_string(m));
  }
  const double t0 = traj.times.front();
  const double t1 = traj.times.back();
  const double h = (t1 - t0) / (m - 1);
  if (!(std::abs(h) > 0.0)) throw ValidationError("analyticity_probe: degenerate time span");
  for (int i = 0; i < m; ++i) {
    if (std::abs(traj.times[i] - (t0 + i * h)) > 1e-9 * std::abs(t1 - t0)) {
      throw ValidationError("analyticity_probe: samples are not uniform in time");
    }
  }

  // Uniform nodes keep the least-squares problem well conditioned up to
  // degree ~ 2 sqrt(m).
  const int degree = std::min(m - 1, static_cast<int>(2.0 * std::sqrt(double(m))));
  Eigen::MatrixXd V(m, degree + 1);
  Eigen::MatrixXd rhs(m, 2);
  double scale = 0.0;
  for (int i = 0; i < m; ++i) {
    const double tau = 2.0 * (traj.times[i] - t0) / (t1 - t0) - 1.0;
    V(i, 0) = 1.0;
    if (degree >= 1) V(i, 1) = tau;
    for (int k = 2; k <= degree; ++k) V(i, k) = 2.0 * tau * V(i, k - 1) - V(i, k - 2);
    rhs(i, 0) = traj.positions[i].x1;
    rhs(i, 1) = traj.positions[i].x2;
    scale = std::max({scale, std::abs(rhs(i, 0)), std::abs(rhs(i, 1))});
  }
  const Eigen::MatrixXd coeffs = V.colPivHouseholderQr().solve(rhs);

  AnalyticityReport report;
  report.coefficients1.resize(degree + 1);
  report.coefficients2.resize(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    report.coefficients1[k] = coeffs(k, 0);
    report.coefficients2[k] = coeffs(k, 1);
  }

  // Noise floor: rounding level of the data, or the median of the last third
  // of the coefficients when the expansion has already plateaued.
  auto tail_median = [&](const std::vector<double>& c) {
    std::vector<double> tail;
    for (int k = (2 * (degree + 1)) / 3; k <= degree; ++k) tail.push_back(std::abs(c[k]));
    std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
    return tail[tail.size() / 2];
  };
  const double rounding = 16.0 * kEps * std::max(scale, 1e-300);
  const double floor1 = std::max(rounding, tail_median(report.coefficients1));
  const double floor2 = std::max(rounding, tail_median(report.coefficients2));
  report.noise_floor = std::max(floor1, floor2);

  const DecayFit f1 = fit_decay(report.coefficients1, floor1);
  const DecayFit f2 = fit_decay(report.coefficients2, floor2);
  report.resolved_terms = std::max(f1.resolved, f2.resolved);
  report.machine_floor_tail = !f1.fitted && !f2.fitted;
  report.decay_rate = -std::numeric_limits<double>::infinity();
  report.fit_quality = 1.0;
  // The slowest-decaying component sets the rate; its fit quality is the one
  // reported (entire components decay faster than geometrically).
  for (const DecayFit* f : {&f1, &f2}) {
    if (!f->fitted || f->slope <= report.decay_rate) continue;
    report.decay_rate = f->slope;
    report.fit_quality = f->r2;
  }
  return report;
}

}  // namespace ipm
