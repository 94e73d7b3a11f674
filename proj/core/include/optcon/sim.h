#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optcon/controller.h"
#include "optcon/costs.h"
#include "optcon/generator.h"
#include "optcon/graph.h"
#include "optcon/integrator.h"
#include "optcon/plants.h"

namespace optcon {

enum class ControllerMode {
  kFull,     // adaptive law with theta
  kReduced,  // fixed-gain law, needs declared bound functions
  kTracking, // single integrators driven by u = r_dot - k (y - r)
};

const char* ToString(ControllerMode mode);

// Everything one agent needs, with uncertainty and initial state resolved.
struct AgentSpec {
  Plant plant;
  Eigen::VectorXd w;
  CostFunction cost;
  DesignFunctions design;
  ChainDesign chain;
  AgentState initial;
  ControllerState initial_controller;
};

struct IntegratorConfig {
  double h = 1e-3;
  double horizon = 30.0;
  int log_every = 100;
  bool refine = true;
  RefinementConfig refinement;
  double divergence_limit = 1e9;
};

struct MetricsConfig {
  double tol_out = 0.05;
  double state_norm_limit = 1e6;
  double vo_tol = 1e-9;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  Digraph graph;
  std::vector<AgentSpec> agents;
  ControllerMode mode = ControllerMode::kFull;
  bool auto_gains = false;
  GeneratorGains gains;
  double tracking_gain = 1.0;
  HessianSampling hessian_sampling;
  IntegratorConfig integrator;
  MetricsConfig metrics;

  int size() const { return static_cast<int>(agents.size()); }
  CostEnsemble Costs() const;
  // Checks N consistency, h > 0 and T >= 10 h; throws Error(kConfiguration).
  void Validate() const;
};

// Closed-loop vector layout: per agent [z (m), x (n), eta, theta, r, v].
struct AgentSlots {
  int z = 0;
  int x = 0;
  int eta = 0;
  int theta = 0;
  int r = 0;
  int v = 0;
};

std::vector<AgentSlots> StateLayout(const Scenario& sc, int* total = nullptr);

// Stacked initial state in StateLayout order.
Eigen::VectorXd InitialState(const Scenario& sc);

// The coupled closed-loop vector field with fixed generator gains. The
// returned object keeps a reference to `sc`; `inputs`, when non-null,
// receives the applied u_i.
class ClosedLoopField {
 public:
  ClosedLoopField(const Scenario& sc, const GeneratorGains& gains);

  void Evaluate(const Eigen::VectorXd& s, Eigen::VectorXd& ds,
                Eigen::VectorXd* inputs = nullptr);
  int dimension() const { return dimension_; }
  const std::vector<AgentSlots>& slots() const { return slots_; }

 private:
  const Scenario& sc_;
  GeneratorGains gains_;
  std::vector<AgentSlots> slots_;
  int dimension_ = 0;
  std::vector<std::vector<NeighborSnapshot>> neighbors_;
  std::vector<AgentState> plant_state_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> outputs;
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Eigen::VectorXd> r;
  std::vector<Eigen::VectorXd> v;
  std::vector<Eigen::VectorXd> theta;

  std::size_t size() const { return times.size(); }
  int agents() const { return outputs.empty() ? 0 : int(outputs[0].size()); }
};

struct ExpFit {
  double rate = 0.0;
  double r_squared = 0.0;
};

struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  double y_star = 0.0;
  Eigen::VectorXd final_output_errors;
  double max_state_norm = 0.0;
  Eigen::VectorXd theta_final;
  ExpFit exp_fit;            // on max_i |y_i - y*|
  ExpFit generator_exp_fit;  // on max_i |r_i - y*|
  bool vo_monotone = false;
  double v_sum_drift = 0.0;
  bool theta_monotone = false;
  bool semistable = false;

  GeneratorGains gains;
  bool gains_meet_bounds = false;
  std::vector<std::string> warnings;
  long long rk4_steps = 0;
  long long refined_steps = 0;
};

struct RunResult {
  Trajectory trajectory;
  RunReport report;
};

// Data for the generator Lyapunov monitor.
struct VoMonitor {
  GeneratorEquilibrium equilibrium;
  ComplementBasis basis;
  double alpha = 1.0;
};

// Integrates all agents synchronously from the scenario's initial state.
// Refuses graphs that are not weight-balanced and strongly connected
// (Error(kAssumption)); throws DivergenceError when a state component turns
// non-finite or exceeds the divergence limit.
RunResult RunClosedLoop(const Scenario& sc);

// Least-squares line through (t, log(e + 1e-15)) for samples t >= t_from.
ExpFit FitExponential(const std::vector<double>& t,
                      const std::vector<double>& e, double t_from);

RunReport ComputeMetrics(const Trajectory& traj, double y_star,
                         const MetricsConfig& cfg,
                         const VoMonitor* monitor = nullptr);

}  // namespace optcon
