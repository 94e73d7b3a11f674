// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optcon/costs.h"
#include "optcon/error.h"
#include "optcon/generator.h"
#include "optcon/graph.h"
#include "optcon/integrator.h"
#include "optcon/plants.h"
#include "optcon/random.h"
#include "optcon/report_io.h"
#include "optcon/scenario.h"
#include "optcon/sim.h"

namespace {

using namespace optcon;
using Clock = std::chrono::steady_clock;

int failures = 0;

void Report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Scenario Load(const std::string& name, std::uint64_t seed) {
  const std::string path = std::string(OPTCON_SCENARIO_DIR) + "/" + name + ".json";
  return ParseScenario(ReadTextFile(path), ScenarioOptions{seed, {}});
}

bool ThetaNondecreasing(const Trajectory& tr) {
  for (std::size_t k = 1; k < tr.size(); ++k) {
    if ((tr.theta[k] - tr.theta[k - 1]).minCoeff() < 0.0) return false;
  }
  return true;
}

// Shared by the sweep criteria: theta monotonicity of every shipped run.
bool all_theta_monotone = true;
int shipped_runs = 0;

void Track(const Trajectory& tr) {
  ++shipped_runs;
  all_theta_monotone = all_theta_monotone && ThetaNondecreasing(tr);
}

void SpectrumCriterion() {
  const auto start = Clock::now();
  const std::string path = std::string(OPTCON_SCENARIO_DIR) + "/example1.json";
  const LaplacianReport rep =
      BuildLaplacian(ParseScenarioGraph(ReadTextFile(path), {}));
  const double secs = Seconds(start);
  const bool ok = std::abs(rep.lambda2 - 2.0) <= 1e-9 &&
                  std::abs(rep.lambdaN - 3.0) <= 1e-9 && secs < 1.0;
  Report("AC1 spectrum", ok,
         Fmt("lambda2=%.12f lambdaN=%.12f (expect 2, 3 within 1e-9) in %.3fs",
             rep.lambda2, rep.lambdaN, secs));
}

void OptimumCriterion() {
  const auto start = Clock::now();
  std::vector<CostFunction> costs;
  for (int i = 1; i <= 4; ++i) costs.push_back(CostFunction::Example2(i));
  const double y = GlobalOptimum(CostEnsemble(costs));
  const double secs = Seconds(start);
  Report("AC2 optimum", std::abs(y - 3.24) <= 0.01 && secs < 1.0,
         Fmt("y*=%.6f (expect 3.24 +- 0.01) in %.3fs", y, secs));
}

// Runs seeds 1..10 and checks |y_i(T) - target| <= 0.05 for every agent.
void SweepCriterion(const char* id, const std::string& scenario,
                    const std::function<double(const Trajectory&)>& target) {
  int passed = 0;
  double worst_err = 0.0;
  double worst_secs = 0.0;
  std::string notes;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    try {
      const Scenario sc = Load(scenario, seed);
      const auto start = Clock::now();
      const RunResult res = RunClosedLoop(sc);
      const double secs = Seconds(start);
      worst_secs = std::max(worst_secs, secs);
      const Trajectory& tr = res.trajectory;
      Track(tr);
      const bool right_gains = res.report.gains.alpha == 1.0 &&
                               res.report.gains.beta == 15.0;
      const double err =
          (tr.outputs.back().array() - target(tr)).abs().maxCoeff();
      worst_err = std::max(worst_err, err);
      if (err <= 0.05 && secs < 30.0 && right_gains &&
          std::abs(tr.times.back() - 30.0) < 1e-9) {
        ++passed;
      } else {
        notes += Fmt(" seed%d(err=%.3g,%.1fs)", int(seed), err, secs);
      }
    } catch (const std::exception& e) {
      notes += Fmt(" seed%d(%s)", int(seed), e.what());
    }
  }
  Report(id, passed == 10,
         Fmt("%d/10 seeds within 0.05 at T=30, worst error %.3g, slowest "
             "%.2fs%s",
             passed, worst_err, worst_secs, notes.c_str()));
}

void GeneratorCriteria() {
  try {
    const Scenario sc = Load("generator_only", 1);
    const RunResult res = RunClosedLoop(sc);
    const Trajectory& tr = res.trajectory;
    Track(tr);

    // Recompute V_o along the log from the generator states.
    const CostEnsemble costs = sc.Costs();
    const GeneratorGains gains = res.report.gains;
    const GeneratorEquilibrium eq =
        ComputeEquilibrium(costs, sc.graph, gains.alpha);
    const ComplementBasis basis = MakeComplementBasis(sc.size());
    double worst_rise = -INFINITY;
    double prev = LyapunovVo({tr.r[0], tr.v[0]}, eq, basis, gains.alpha);
    double drift = 0.0;
    for (std::size_t k = 1; k < tr.size(); ++k) {
      const double vo = LyapunovVo({tr.r[k], tr.v[k]}, eq, basis, gains.alpha);
      worst_rise = std::max(worst_rise, vo - prev);
      prev = vo;
      drift = std::max(drift, std::abs(tr.v[k].sum() - tr.v[0].sum()));
    }
    const bool meets = MeetsGainBounds(gains, costs.l_lower(), costs.l_upper(),
                                       BuildLaplacian(sc.graph).lambda2,
                                       BuildLaplacian(sc.graph).lambdaN);
    Report("AC5 lyapunov", meets && worst_rise <= 1e-9 && drift <= 1e-6,
           Fmt("largest V_o rise %.3g (<= 1e-9), sum v drift %.3g (<= 1e-6), "
               "gains meet bound: %s",
               worst_rise, drift, meets ? "yes" : "no"));

    // Independent fit of max_i |r_i - y*| over the second half.
    const double y_star = GlobalOptimum(costs);
    const double t_half = 0.5 * (tr.times.front() + tr.times.back());
    std::vector<double> ts, ls;
    for (std::size_t k = 0; k < tr.size(); ++k) {
      if (tr.times[k] < t_half) continue;
      ts.push_back(tr.times[k]);
      ls.push_back(std::log((tr.r[k].array() - y_star).abs().maxCoeff() + 1e-15));
    }
    const int m = static_cast<int>(ts.size());
    Eigen::MatrixXd a(m, 2);
    Eigen::VectorXd b(m);
    for (int k = 0; k < m; ++k) {
      a(k, 0) = ts[k];
      a(k, 1) = 1.0;
      b(k) = ls[k];
    }
    const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
    const double ss_res = (a * coef - b).squaredNorm();
    const double ss_tot = (b.array() - b.mean()).square().sum();
    const double r2 = 1.0 - ss_res / ss_tot;
    Report("AC6 exponential", coef(0) < 0.0 && r2 >= 0.95,
           Fmt("slope %.4f (< 0), R^2 %.5f (>= 0.95) over %d samples; "
               "report fit slope %.4f R^2 %.5f",
               coef(0), r2, m, res.report.generator_exp_fit.rate,
               res.report.generator_exp_fit.r_squared));
  } catch (const std::exception& e) {
    Report("AC5 lyapunov", false, e.what());
    Report("AC6 exponential", false, e.what());
  }
}

double GradientFiniteDifferenceError() {
  std::vector<CostFunction> costs = {CostFunction::Quadratic(0.7, 2.5)};
  for (int i = 1; i <= 4; ++i) costs.push_back(CostFunction::Example2(i));
  double worst = 0.0;
  for (const CostFunction& c : costs) {
    for (double y = -10.0; y <= 10.0; y += 0.25) {
      const double h = 1e-5;
      const double fd = (c.Value(y + h) - c.Value(y - h)) / (2 * h);
      worst = std::max(worst, std::abs(fd - c.Gradient(y)) / std::max(1.0, std::abs(fd)));
    }
  }
  return worst;
}

double OriginResidual() {
  struct Case {
    Plant plant;
    Eigen::VectorXd lo, hi;
  };
  const std::vector<Case> cases = {
      {MakeManipulator({}), Eigen::VectorXd::Zero(2), Eigen::VectorXd::Constant(2, 0.5)},
      {MakeFitzHughNagumo(0.2, 0.8, 0.8), Eigen::VectorXd::Constant(4, -0.3),
       Eigen::VectorXd::Constant(4, 0.3)},
      {MakeVanDerPol(), Eigen::VectorXd::Constant(3, -0.3), Eigen::VectorXd::Constant(3, 0.3)},
      {MakeIntegratorChain(2), Eigen::VectorXd(), Eigen::VectorXd()}};
  double worst = 0.0;
  Rng rng(2024);
  for (const Case& c : cases) {
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd w(c.plant.w_dim);
      for (int j = 0; j < w.size(); ++j) {
        w(j) = c.lo(j) + (c.hi(j) - c.lo(j)) * rng.Uniform01();
      }
      const AgentState s{Eigen::VectorXd::Zero(c.plant.m), Eigen::VectorXd::Zero(c.plant.n)};
      const PlantDerivative d = PlantField(c.plant, s, 0.0, w);
      double r = d.x_dot.cwiseAbs().maxCoeff();
      if (d.z_dot.size() > 0) r = std::max(r, d.z_dot.cwiseAbs().maxCoeff());
      worst = std::max(worst, r);
    }
  }
  return worst;
}

// Manipulator in its original joint coordinates (q1, q1', q2, q2').
Eigen::Vector4d JointField(const ManipulatorParams& m, const Eigen::Vector2d& w,
                           const Eigen::Vector4d& s, double u) {
  const double mgl = (1 + w(0)) * m.m0 * m.grav * (1 + w(1)) * m.l0;
  return {s(1), -(mgl * std::sin(s(0)) + m.k * (s(0) - s(2))) / m.j1, s(3),
          (m.k * (s(0) - s(2)) + u) / m.j2};
}

double ChainVersusJointError() {
  const ManipulatorParams mp{};
  const Eigen::Vector2d w(0.3, 0.15);
  const Plant p = MakeManipulator(mp);
  Eigen::Vector4d joint(0.5, -0.2, 0.3, 0.4);
  Eigen::VectorXd chain =
      ManipulatorChainState(mp, w, joint(0), joint(1), joint(2), joint(3));
  auto u = [](double t) { return std::cos(2 * t); };
  const VectorField field = [&](double t, const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
    ds = PlantField(p, {Eigen::VectorXd(), s}, u(t), w).x_dot;
  };
  const double h = 1e-3;
  double worst = 0.0;
  for (int k = 0; k < 5000; ++k) {
    const double t = k * h;
    const Eigen::Vector4d k1 = JointField(mp, w, joint, u(t));
    const Eigen::Vector4d k2 = JointField(mp, w, joint + 0.5 * h * k1, u(t + 0.5 * h));
    const Eigen::Vector4d k3 = JointField(mp, w, joint + 0.5 * h * k2, u(t + 0.5 * h));
    const Eigen::Vector4d k4 = JointField(mp, w, joint + h * k3, u(t + h));
    joint += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    chain = Rk4Step(field, t, chain, h);
    worst = std::max(worst, std::abs(joint(0) - chain(0)));
  }
  return worst;
}

// Error at t = 1 of RK4 on a damped rotation against the closed form.
double Rk4ErrorAtOne(int steps) {
  const VectorField f = [](double, const Eigen::VectorXd& s, Eigen::VectorXd& ds) {
    ds(0) = -0.5 * s(0) + 2.0 * s(1);
    ds(1) = -2.0 * s(0) - 0.5 * s(1);
  };
  Eigen::VectorXd s(2);
  s << 1.0, 0.0;
  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) s = Rk4Step(f, k * h, s, h);
  const double decay = std::exp(-0.5);
  return std::hypot(s(0) - decay * std::cos(2.0), s(1) + decay * std::sin(2.0));
}

void PropertyCriterion() {
  std::string detail;
  bool ok = true;
  auto check = [&](const char* name, bool pass, const std::string& value) {
    ok = ok && pass;
    detail += Fmt("%s%s %s%s", detail.empty() ? "" : "; ", name, value.c_str(),
                  pass ? "" : " [fail]");
  };
  try {
    const double fd = GradientFiniteDifferenceError();
    check("gradient-fd", fd <= 1e-5, Fmt("%.2e<=1e-5", fd));
    const double origin = OriginResidual();
    check("origin", origin <= 1e-12, Fmt("%.2e<=1e-12", origin));
    const double chain = ChainVersusJointError();
    check("chain-vs-joint", chain <= 1e-4, Fmt("%.2e<=1e-4", chain));
    const double factor = Rk4ErrorAtOne(10) / Rk4ErrorAtOne(20);
    check("rk4-order", factor >= 12.0 && factor <= 20.0, Fmt("factor %.3f in [12,20]", factor));
    check("theta-monotone", all_theta_monotone && shipped_runs > 0,
          Fmt("%d runs", shipped_runs));
    bool same = true;
    for (const char* name : {"example1", "example2", "generator_only"}) {
      const std::string first = ReportToJson(RunClosedLoop(Load(name, 7)).report);
      const std::string second = ReportToJson(RunClosedLoop(Load(name, 7)).report);
      same = same && first == second;
    }
    check("determinism", same, same ? "bitwise equal" : "reports differ");
  } catch (const std::exception& e) {
    check("exception", false, e.what());
  }
  Report("AC7 properties", ok, detail);
}

}  // namespace

int main() {
  SpectrumCriterion();
  OptimumCriterion();
  // Quadratic costs centered at the initial outputs, so y* is their mean.
  SweepCriterion("AC3 example1", "example1",
                 [](const Trajectory& tr) { return tr.outputs.front().mean(); });
  SweepCriterion("AC4 example2", "example2",
                 [](const Trajectory&) { return 3.24; });
  GeneratorCriteria();
  PropertyCriterion();
  std::printf("%s: %d criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
