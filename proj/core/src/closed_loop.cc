#include <cmath>
#include <sstream>
#include <vector>

#include "optcon/error.h"
#include "optcon/sim.h"

namespace optcon {

const char* ToString(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::kFull: return "full";
    case ControllerMode::kReduced: return "reduced";
    case ControllerMode::kTracking: return "tracking";
  }
  return "unknown";
}

CostEnsemble Scenario::Costs() const {
  std::vector<CostFunction> costs;
  costs.reserve(agents.size());
  for (const auto& a : agents) costs.push_back(a.cost);
  return CostEnsemble(std::move(costs), hessian_sampling);
}

void Scenario::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorKind::kConfiguration, msg);
  };
  if (agents.empty()) fail("scenario has no agents");
  if (graph.size() != size()) {
    std::ostringstream msg;
    msg << "graph has " << graph.size() << " nodes but scenario has "
        << size() << " agents";
    fail(msg.str());
  }
  const auto& ig = integrator;
  if (!(ig.h > 0.0) || !std::isfinite(ig.h)) fail("integrator.h must be > 0");
  if (!(ig.horizon >= 10.0 * ig.h)) fail("integrator.T must be >= 10 h");
  if (ig.log_every < 1) fail("integrator.log_every must be >= 1");
  if (!(ig.divergence_limit > 0.0)) fail("divergence limit must be > 0");
  for (int i = 0; i < size(); ++i) {
    const auto& a = agents[i];
    const std::string who = "agent " + std::to_string(i + 1) + ": ";
    if (a.w.size() != a.plant.w_dim) fail(who + "uncertainty size mismatch");
    if (a.initial.x.size() != a.plant.n || a.initial.z.size() != a.plant.m) {
      fail(who + "initial state size mismatch");
    }
    if (mode == ControllerMode::kTracking) {
      if (a.plant.n != 1 || a.plant.m != 0) {
        fail(who + "tracking mode needs single-integrator plants");
      }
    } else if (a.chain.chain_length() != a.plant.n) {
      fail(who + "chain coefficients do not match the plant's chain length");
    }
  }
}

std::vector<AgentSlots> StateLayout(const Scenario& sc, int* total) {
  std::vector<AgentSlots> slots(sc.agents.size());
  int off = 0;
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    const Plant& p = sc.agents[i].plant;
    AgentSlots& s = slots[i];
    s.z = off;
    s.x = off + p.m;
    s.eta = s.x + p.n;
    s.theta = s.eta + 1;
    s.r = s.theta + 1;
    s.v = s.r + 1;
    off = s.v + 1;
  }
  if (total) *total = off;
  return slots;
}

ClosedLoopField::ClosedLoopField(const Scenario& sc,
                                 const GeneratorGains& gains)
    : sc_(sc), gains_(gains) {
  slots_ = StateLayout(sc, &dimension_);
  const int n = sc.size();
  neighbors_.resize(n);
  plant_state_.resize(n);
  for (int i = 0; i < n; ++i) {
    neighbors_[i].resize(sc.graph.in_neighbors(i).size());
    plant_state_[i].z.resize(sc.agents[i].plant.m);
    plant_state_[i].x.resize(sc.agents[i].plant.n);
  }
}

// Each agent reads only its own block and the (r, v) entries of its
// in-neighbors.
void ClosedLoopField::Evaluate(const Eigen::VectorXd& s, Eigen::VectorXd& ds,
                               Eigen::VectorXd* inputs) {
  const int n = sc_.size();
  for (int i = 0; i < n; ++i) {
    const AgentSpec& a = sc_.agents[i];
    const AgentSlots& sl = slots_[i];
    const auto& nbrs = sc_.graph.in_neighbors(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const int j = nbrs[k];
      neighbors_[i][k] = {s(slots_[j].r), s(slots_[j].v),
                          sc_.graph.weight(i, j)};
    }
    AgentState& ps = plant_state_[i];
    ps.z = s.segment(sl.z, a.plant.m);
    ps.x = s.segment(sl.x, a.plant.n);
    const ControllerState cs{s(sl.eta), s(sl.theta), s(sl.r), s(sl.v)};

    ControlOutput c;
    if (sc_.mode == ControllerMode::kTracking) {
      const auto rates =
          LocalGeneratorUpdate(cs.r, cs.v, neighbors_[i], a.cost, gains_);
      c.r_dot = rates.r_dot;
      c.v_dot = rates.v_dot;
      c.u = rates.r_dot - sc_.tracking_gain * (ps.x(0) - cs.r);
    } else {
      const double zeta = Zeta(ps.x, cs.r, a.chain);
      c = sc_.mode == ControllerMode::kFull
              ? ControlFull(cs, zeta, a.design, neighbors_[i], a.cost, gains_)
              : ControlReduced(cs, zeta, a.design, neighbors_[i], a.cost,
                               gains_);
    }
    const PlantDerivative pd = PlantField(a.plant, ps, c.u, a.w);
    ds.segment(sl.z, a.plant.m) = pd.z_dot;
    ds.segment(sl.x, a.plant.n) = pd.x_dot;
    ds(sl.eta) = c.eta_dot;
    ds(sl.theta) = c.theta_dot;
    ds(sl.r) = c.r_dot;
    ds(sl.v) = c.v_dot;
    if (inputs) (*inputs)(i) = c.u;
  }
}

Eigen::VectorXd InitialState(const Scenario& sc) {
  int total = 0;
  const auto slots = StateLayout(sc, &total);
  Eigen::VectorXd s(total);
  for (int i = 0; i < sc.size(); ++i) {
    const AgentSpec& a = sc.agents[i];
    const AgentSlots& sl = slots[i];
    s.segment(sl.z, a.plant.m) = a.initial.z;
    s.segment(sl.x, a.plant.n) = a.initial.x;
    s(sl.eta) = a.initial_controller.eta;
    s(sl.theta) = a.initial_controller.theta;
    s(sl.r) = a.initial_controller.r;
    s(sl.v) = a.initial_controller.v;
  }
  return s;
}

namespace {

void CheckBounded(const Eigen::VectorXd& s, double t, double limit) {
  for (int k = 0; k < s.size(); ++k) {
    if (!std::isfinite(s(k)) || std::abs(s(k)) > limit) {
      std::ostringstream msg;
      msg << "state component " << k << " diverged (" << s(k)
          << ") at t = " << t;
      throw DivergenceError(msg.str(), t, k);
    }
  }
}

}  // namespace

RunResult RunClosedLoop(const Scenario& sc) {
  sc.Validate();
  const LaplacianReport lap = BuildLaplacian(sc.graph);
  if (!lap.weight_balanced || !lap.strongly_connected) {
    std::ostringstream msg;
    msg << "communication graph must be weight-balanced and strongly "
           "connected (balanced="
        << (lap.weight_balanced ? "yes" : "no")
        << ", strongly connected=" << (lap.strongly_connected ? "yes" : "no")
        << ")";
    throw Error(ErrorKind::kAssumption, msg.str());
  }
  const CostEnsemble costs = sc.Costs();
  const int n_agents = sc.size();

  std::vector<std::string> warnings;
  GeneratorGains gains = sc.gains;
  bool meets = false;
  if (n_agents >= 2) {
    const GeneratorGains bound = SelectGains(costs.l_lower(), costs.l_upper(),
                                             lap.lambda2, lap.lambdaN);
    if (sc.auto_gains) gains = bound;
    meets = MeetsGainBounds(gains, costs.l_lower(), costs.l_upper(),
                            lap.lambda2, lap.lambdaN);
    if (!meets) {
      std::ostringstream msg;
      msg << "gains (alpha=" << gains.alpha << ", beta=" << gains.beta
          << ") below the sufficient gain bound (alpha=" << bound.alpha
          << ", beta=" << bound.beta << ")";
      warnings.push_back(msg.str());
    }
  } else {
    meets = true;
  }

  const double y_star = GlobalOptimum(costs);

  ClosedLoopField field(sc, gains);
  const auto& slots = field.slots();
  const int total = field.dimension();
  const VectorField f = [&field](double, const Eigen::VectorXd& s,
                                 Eigen::VectorXd& ds) {
    field.Evaluate(s, ds);
  };

  const auto& ig = sc.integrator;
  const long long steps = std::llround(ig.horizon / ig.h);

  Trajectory traj;
  Eigen::VectorXd scratch(total);
  auto log = [&](double t, const Eigen::VectorXd& s) {
    Eigen::VectorXd u(n_agents), y(n_agents), r(n_agents), v(n_agents),
        th(n_agents);
    field.Evaluate(s, scratch, &u);
    for (int i = 0; i < n_agents; ++i) {
      y(i) = s(slots[i].x);
      r(i) = s(slots[i].r);
      v(i) = s(slots[i].v);
      th(i) = s(slots[i].theta);
    }
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.outputs.push_back(std::move(y));
    traj.inputs.push_back(std::move(u));
    traj.r.push_back(std::move(r));
    traj.v.push_back(std::move(v));
    traj.theta.push_back(std::move(th));
  };

  Eigen::VectorXd s = InitialState(sc);
  CheckBounded(s, 0.0, ig.divergence_limit);
  log(0.0, s);

  RefinementStats stats;
  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * ig.h;
    if (ig.refine) {
      s = RefinedRk4Step(f, t, s, ig.h, ig.refinement, &stats);
    } else {
      s = Rk4Step(f, t, s, ig.h);
      ++stats.rk4_steps;
    }
    const double t_next = static_cast<double>(k + 1) * ig.h;
    CheckBounded(s, t_next, ig.divergence_limit);
    if ((k + 1) % ig.log_every == 0 || k + 1 == steps) log(t_next, s);
  }

  std::optional<VoMonitor> monitor;
  if (n_agents >= 2) {
    monitor = VoMonitor{ComputeEquilibrium(costs, sc.graph, gains.alpha),
                        MakeComplementBasis(n_agents), gains.alpha};
  } else {
    warnings.push_back("single agent: Lyapunov monitor skipped");
  }

  RunResult out;
  out.report = ComputeMetrics(traj, y_star, sc.metrics,
                              monitor ? &*monitor : nullptr);
  out.report.scenario = sc.name;
  out.report.seed = sc.seed;
  out.report.gains = gains;
  out.report.gains_meet_bounds = meets;
  out.report.rk4_steps = stats.rk4_steps;
  out.report.refined_steps = stats.split_steps;
  for (auto& w : warnings) out.report.warnings.push_back(std::move(w));
  out.trajectory = std::move(traj);
  return out;
}

}  // namespace optcon
