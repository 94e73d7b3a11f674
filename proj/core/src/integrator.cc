#include "optcon/integrator.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optcon/error.h"

namespace optcon {

namespace {

int FirstNonFinite(const Eigen::VectorXd& v) {
  for (int k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v(k))) return k;
  }
  return -1;
}

// Returns the index of a non-finite stage component, or -1 on success.
int TryRk4(const VectorField& f, double t, const Eigen::VectorXd& s,
           double h, Eigen::VectorXd& out) {
  const auto n = s.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n);
  f(t, s, k1);
  if (int bad = FirstNonFinite(k1); bad >= 0) return bad;
  f(t + 0.5 * h, s + 0.5 * h * k1, k2);
  if (int bad = FirstNonFinite(k2); bad >= 0) return bad;
  f(t + 0.5 * h, s + 0.5 * h * k2, k3);
  if (int bad = FirstNonFinite(k3); bad >= 0) return bad;
  f(t + h, s + h * k3, k4);
  if (int bad = FirstNonFinite(k4); bad >= 0) return bad;
  out = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return FirstNonFinite(out);
}

[[noreturn]] void ThrowDivergence(double t, int component) {
  std::ostringstream msg;
  msg << "non-finite derivative in component " << component << " at t = "
      << t;
  throw DivergenceError(msg.str(), t, component);
}

Eigen::VectorXd Refine(const VectorField& f, double t,
                       const Eigen::VectorXd& s, double h,
                       const RefinementConfig& cfg, int depth,
                       RefinementStats* stats) {
  Eigen::VectorXd full, mid, half;
  const int bad_full = TryRk4(f, t, s, h, full);
  int bad_half = TryRk4(f, t, s, 0.5 * h, mid);
  if (bad_half < 0) bad_half = TryRk4(f, t + 0.5 * h, mid, 0.5 * h, half);

  bool accept = false;
  if (bad_full < 0 && bad_half < 0) {
    const double scale = 1.0 + half.cwiseAbs().maxCoeff();
    const double err = (full - half).cwiseAbs().maxCoeff() / scale;
    accept = err <= cfg.tol;
  }
  if (accept || depth >= cfg.max_depth) {
    if (bad_half >= 0) ThrowDivergence(t, bad_half);
    if (stats) {
      stats->rk4_steps += 2;
      stats->max_depth = std::max(stats->max_depth, depth);
    }
    return half;
  }
  const Eigen::VectorXd left =
      Refine(f, t, s, 0.5 * h, cfg, depth + 1, stats);
  return Refine(f, t + 0.5 * h, left, 0.5 * h, cfg, depth + 1, stats);
}

}  // namespace

Eigen::VectorXd Rk4Step(const VectorField& f, double t,
                        const Eigen::VectorXd& s, double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "step size must be positive");
  }
  Eigen::VectorXd out;
  if (int bad = TryRk4(f, t, s, h, out); bad >= 0) ThrowDivergence(t, bad);
  return out;
}

Eigen::VectorXd RefinedRk4Step(const VectorField& f, double t,
                               const Eigen::VectorXd& s, double h,
                               const RefinementConfig& cfg,
                               RefinementStats* stats) {
  if (!(h > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "step size must be positive");
  }
  const int depth_before = stats ? stats->max_depth : 0;
  RefinementStats local;
  Eigen::VectorXd out = Refine(f, t, s, h, cfg, 0, &local);
  if (stats) {
    stats->rk4_steps += local.rk4_steps;
    if (local.max_depth > 0) ++stats->split_steps;
    stats->max_depth = std::max(depth_before, local.max_depth);
  }
  return out;
}

}  // namespace optcon
