#include "optcon/report_io.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "optcon/error.h"

namespace optcon {

namespace {

using json = nlohmann::json;

json Num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json Vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(Num(v(i)));
  return a;
}

json Fit(const ExpFit& f) {
  return {{"rate", Num(f.rate)}, {"r_squared", Num(f.r_squared)}};
}

void AppendDouble(std::string& line, double x) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  line.append(buf.data(), res.ptr);
}

}  // namespace

std::string ReportToJson(const RunReport& r) {
  json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["y_star"] = Num(r.y_star);
  j["final_output_errors"] = Vec(r.final_output_errors);
  j["max_state_norm"] = Num(r.max_state_norm);
  j["theta_final"] = Vec(r.theta_final);
  j["exp_fit"] = Fit(r.exp_fit);
  j["generator_exp_fit"] = Fit(r.generator_exp_fit);
  j["vo_monotone"] = r.vo_monotone;
  j["v_sum_drift"] = Num(r.v_sum_drift);
  j["theta_monotone"] = r.theta_monotone;
  j["semistable"] = r.semistable;
  j["gains"] = {{"alpha", Num(r.gains.alpha)}, {"beta", Num(r.gains.beta)}};
  j["gains_meet_bounds"] = r.gains_meet_bounds;
  j["integrator"] = {{"rk4_steps", r.rk4_steps},
                     {"refined_steps", r.refined_steps}};
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string LaplacianReportToJson(const LaplacianReport& r) {
  json lap = json::array();
  for (int i = 0; i < r.laplacian.rows(); ++i) {
    lap.push_back(Vec(r.laplacian.row(i).transpose()));
  }
  json j;
  j["n"] = r.laplacian.rows();
  j["laplacian"] = lap;
  j["sym_eigenvalues"] = Vec(r.sym_eigenvalues);
  j["lambda2"] = Num(r.lambda2);
  j["lambdaN"] = Num(r.lambdaN);
  j["weight_balanced"] = r.weight_balanced;
  j["strongly_connected"] = r.strongly_connected;
  return j.dump(2) + "\n";
}

std::string GainsToJson(const GeneratorGains& gains,
                        const GeneratorGains& bound, bool meets_bound) {
  json j;
  j["alpha"] = Num(gains.alpha);
  j["beta"] = Num(gains.beta);
  j["bound"] = {{"alpha", Num(bound.alpha)}, {"beta", Num(bound.beta)}};
  j["meets_bound"] = meets_bound;
  return j.dump(2) + "\n";
}

void WriteTrajectoryCsv(std::ostream& out, const Trajectory& traj) {
  const int n = traj.agents();
  std::string line = "t";
  for (const char* col : {"y", "r", "u", "theta", "v"}) {
    for (int i = 1; i <= n; ++i) {
      line += ',';
      line += col;
      line += '_';
      line += std::to_string(i);
    }
  }
  out << line << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    line.clear();
    AppendDouble(line, traj.times[k]);
    for (const auto* series :
         {&traj.outputs, &traj.r, &traj.inputs, &traj.theta, &traj.v}) {
      const Eigen::VectorXd& row = (*series)[k];
      for (int i = 0; i < n; ++i) {
        line += ',';
        AppendDouble(line, row(i));
      }
    }
    out << line << '\n';
  }
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorKind::kIo, "cannot create directory '" +
                                      path.parent_path().string() +
                                      "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for '" + path.string() + "'");
}

}  // namespace optcon
