#include <algorithm>
#include <cmath>
#include <limits>

#include "optcon/sim.h"

namespace optcon {

ExpFit FitExponential(const std::vector<double>& t,
                      const std::vector<double>& e, double t_from) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < t.size() && k < e.size(); ++k) {
    if (t[k] < t_from) continue;
    const double x = t[k];
    const double y = std::log(e[k] + 1e-15);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  ExpFit fit;
  if (n < 2) return fit;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (!(vx > 0.0)) return fit;
  fit.rate = cxy / vx;
  // A flat log-error line is fit perfectly.
  fit.r_squared =
      vy > 0.0 ? std::clamp((cxy * cxy) / (vx * vy), 0.0, 1.0) : 1.0;
  return fit;
}

RunReport ComputeMetrics(const Trajectory& traj, double y_star,
                         const MetricsConfig& cfg, const VoMonitor* monitor) {
  RunReport rep;
  rep.y_star = y_star;
  if (traj.size() == 0) return rep;
  const std::size_t last = traj.size() - 1;

  rep.final_output_errors = (traj.outputs[last].array() - y_star).abs();
  rep.theta_final = traj.theta[last];

  std::vector<double> out_err(traj.size()), gen_err(traj.size());
  double max_norm = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out_err[k] = (traj.outputs[k].array() - y_star).abs().maxCoeff();
    gen_err[k] = (traj.r[k].array() - y_star).abs().maxCoeff();
    const double nrm = traj.states.empty() ? 0.0 : traj.states[k].norm();
    max_norm = std::isfinite(nrm) ? std::max(max_norm, nrm)
                                  : std::numeric_limits<double>::infinity();
  }
  rep.max_state_norm = max_norm;

  const double t_half =
      traj.times.front() + 0.5 * (traj.times.back() - traj.times.front());
  rep.exp_fit = FitExponential(traj.times, out_err, t_half);
  rep.generator_exp_fit = FitExponential(traj.times, gen_err, t_half);

  rep.theta_monotone = true;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    if ((traj.theta[k].array() < traj.theta[k - 1].array()).any()) {
      rep.theta_monotone = false;
      break;
    }
  }

  const double v0 = traj.v.front().sum();
  for (const auto& v : traj.v) {
    rep.v_sum_drift = std::max(rep.v_sum_drift, std::abs(v.sum() - v0));
  }

  rep.vo_monotone = true;
  if (monitor) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const GeneratorState gs{traj.r[k], traj.v[k]};
      const double vo = LyapunovVo(gs, monitor->equilibrium, monitor->basis,
                                   monitor->alpha);
      if (vo > prev + cfg.vo_tol) {
        rep.vo_monotone = false;
        break;
      }
      prev = vo;
    }
  }

  rep.semistable = std::isfinite(max_norm) &&
                   max_norm <= cfg.state_norm_limit &&
                   (rep.final_output_errors.array() <= cfg.tol_out).all();
  return rep;
}

}  // namespace optcon
