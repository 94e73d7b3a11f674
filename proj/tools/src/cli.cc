#include "optcon_cli/cli.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "optcon/costs.h"
#include "optcon/generator.h"
#include "optcon/graph.h"
#include "optcon/report_io.h"
#include "optcon/scenario.h"
#include "optcon/sim.h"

namespace optcon::cli {

namespace fs = std::filesystem;

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDivergence:
      return kExitRuntime;
    case ErrorKind::kParse:
    case ErrorKind::kIo:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

namespace {

struct Options {
  std::string scenario;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool json = false;
  std::optional<double> alpha;
  std::optional<double> beta;
  int seeds = 10;
  int jobs = 1;
};

std::string Fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

ScenarioOptions ToScenarioOptions(const Options& o) {
  return ScenarioOptions{o.seed, o.overrides};
}

int CmdSpectrum(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string text = ReadTextFile(o.scenario);
  const Digraph g = ParseScenarioGraph(text, ToScenarioOptions(o));
  const LaplacianReport rep = BuildLaplacian(g);
  const std::string doc = LaplacianReportToJson(rep);
  if (o.json) {
    out << doc;
  } else {
    out << "nodes              " << g.size() << "\n"
        << "lambda2            " << Fmt(rep.lambda2) << "\n"
        << "lambdaN            " << Fmt(rep.lambdaN) << "\n"
        << "weight_balanced    " << (rep.weight_balanced ? "true" : "false")
        << "\n"
        << "strongly_connected "
        << (rep.strongly_connected ? "true" : "false") << "\n";
  }
  if (!o.out_dir.empty()) WriteFile(fs::path(o.out_dir) / "spectrum.json", doc);
  if (!rep.weight_balanced || !rep.strongly_connected) {
    err << "error: graph must be weight-balanced and strongly connected\n";
    return kExitValidation;
  }
  return kExitOk;
}

int CmdGains(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario sc =
      ParseScenario(ReadTextFile(o.scenario), ToScenarioOptions(o));
  const LaplacianReport lap = BuildLaplacian(sc.graph);
  if (!lap.weight_balanced || !lap.strongly_connected) {
    throw Error(ErrorKind::kAssumption,
                "graph must be weight-balanced and strongly connected");
  }
  const CostEnsemble costs = sc.Costs();
  const GeneratorGains bound = SelectGains(costs.l_lower(), costs.l_upper(),
                                           lap.lambda2, lap.lambdaN);
  GeneratorGains gains = bound;
  if (o.alpha) gains.alpha = *o.alpha;
  if (o.beta) gains.beta = *o.beta;
  if (!(gains.alpha > 0.0) || !(gains.beta > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "gains must be positive");
  }
  const bool meets = MeetsGainBounds(gains, costs.l_lower(), costs.l_upper(),
                                     lap.lambda2, lap.lambdaN);
  const std::string doc = GainsToJson(gains, bound, meets);
  if (o.json) {
    out << doc;
  } else {
    out << "l_lower " << Fmt(costs.l_lower()) << "\n"
        << "l_upper " << Fmt(costs.l_upper()) << "\n"
        << "lambda2 " << Fmt(lap.lambda2) << "\n"
        << "lambdaN " << Fmt(lap.lambdaN) << "\n"
        << "alpha   " << Fmt(gains.alpha) << "\n"
        << "beta    " << Fmt(gains.beta) << "\n";
  }
  if (!meets) {
    err << "warning: gains below the sufficient gain bound (alpha >= "
        << Fmt(bound.alpha) << ", beta >= " << Fmt(bound.beta) << ")\n";
  }
  if (!o.out_dir.empty()) WriteFile(fs::path(o.out_dir) / "gains.json", doc);
  return kExitOk;
}

int CmdOracle(const Options& o, std::ostream& out, std::ostream&) {
  const Scenario sc =
      ParseScenario(ReadTextFile(o.scenario), ToScenarioOptions(o));
  const double y = GlobalOptimum(sc.Costs());
  if (o.json) {
    out << nlohmann::json{{"y_star", y}}.dump() << "\n";
  } else {
    out << "y_star " << Fmt(y) << "\n";
  }
  return kExitOk;
}

void WriteRun(const fs::path& dir, const RunResult& res) {
  std::ostringstream csv;
  WriteTrajectoryCsv(csv, res.trajectory);
  WriteFile(dir / "trajectory.csv", csv.str());
  WriteFile(dir / "report.json", ReportToJson(res.report));
}

int CmdRun(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario sc =
      ParseScenario(ReadTextFile(o.scenario), ToScenarioOptions(o));
  const RunResult res = RunClosedLoop(sc);
  if (!o.out_dir.empty()) WriteRun(o.out_dir, res);
  for (const auto& w : res.report.warnings) err << "warning: " << w << "\n";
  const auto& r = res.report;
  out << "y_star            " << Fmt(r.y_star) << "\n"
      << "max_final_error   " << Fmt(r.final_output_errors.maxCoeff()) << "\n"
      << "max_state_norm    " << Fmt(r.max_state_norm) << "\n"
      << "exp_fit.rate      " << Fmt(r.exp_fit.rate) << "\n"
      << "semistable        " << (r.semistable ? "true" : "false") << "\n";
  return r.semistable ? kExitOk : kExitRuntime;
}

struct SweepEntry {
  std::uint64_t seed = 0;
  std::string status;
  std::string message;
  bool semistable = false;
  double max_final_error = 0.0;
};

int CmdSweep(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.seeds < 0) {
    throw Error(ErrorKind::kInvalidParameter, "--seeds must be >= 0");
  }
  if (o.out_dir.empty()) {
    throw Error(ErrorKind::kInvalidParameter, "sweep needs --out");
  }
  const std::string text = ReadTextFile(o.scenario);
  // Validates the document once up front; also supplies the base seed.
  const Scenario base = ParseScenario(text, ToScenarioOptions(o));

  std::vector<SweepEntry> runs(o.seeds);
  std::atomic<int> next{0};
  std::mutex io;
  auto worker = [&] {
    for (int k = next++; k < o.seeds; k = next++) {
      SweepEntry& e = runs[k];
      e.seed = base.seed + static_cast<std::uint64_t>(k);
      try {
        ScenarioOptions so{e.seed, o.overrides};
        const RunResult res = RunClosedLoop(ParseScenario(text, so));
        WriteRun(fs::path(o.out_dir) / ("seed_" + std::to_string(e.seed)),
                 res);
        e.semistable = res.report.semistable;
        e.max_final_error = res.report.final_output_errors.maxCoeff();
        e.status = e.semistable ? "ok" : "not_semistable";
      } catch (const DivergenceError& ex) {
        e.status = "diverged";
        e.message = ex.what();
      } catch (const Error& ex) {
        e.status = "error";
        e.message = ex.what();
      }
      std::lock_guard<std::mutex> lock(io);
      err << "seed " << e.seed << ": " << e.status << "\n";
    }
  };
  const int jobs = std::clamp(o.jobs, 1, std::max(1, o.seeds));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  nlohmann::json summary;
  summary["scenario"] = base.name;
  summary["n_seeds"] = o.seeds;
  int ok = 0;
  nlohmann::json failing = nlohmann::json::array();
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : runs) {
    if (e.semistable) {
      ++ok;
    } else {
      failing.push_back(e.seed);
    }
    nlohmann::json r{{"seed", e.seed},
                     {"status", e.status},
                     {"semistable", e.semistable}};
    if (e.status == "ok" || e.status == "not_semistable") {
      r["max_final_error"] = e.max_final_error;
    }
    if (!e.message.empty()) r["message"] = e.message;
    list.push_back(std::move(r));
  }
  summary["n_semistable"] = ok;
  summary["failing_seeds"] = failing;
  summary["runs"] = list;
  WriteFile(fs::path(o.out_dir) / "summary.json", summary.dump(2) + "\n");
  out << ok << "/" << o.seeds << " semistable\n";
  if (!failing.empty()) out << "failing seeds: " << failing.dump() << "\n";
  return failing.empty() ? kExitOk : kExitRuntime;
}

}  // namespace

int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Distributed optimal output consensus simulator", "optcon"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub, bool needs_seed) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file")
        ->required();
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--set", o.overrides,
                    "Override a scenario field, e.g. integrator.h=0.0005")
        ->take_all();
    sub->add_flag("--json", o.json, "Print JSON instead of text");
    if (needs_seed) sub->add_option("--seed", o.seed, "Run seed");
  };

  auto* spectrum = app.add_subcommand("spectrum", "Laplacian spectrum checks");
  add_common(spectrum, false);
  auto* gains = app.add_subcommand("gains", "Generator gain bounds");
  add_common(gains, true);
  gains->add_option("--alpha", o.alpha, "Use this alpha instead");
  gains->add_option("--beta", o.beta, "Use this beta instead");
  auto* oracle = app.add_subcommand("oracle", "Centralized optimum y*");
  add_common(oracle, true);
  auto* run = app.add_subcommand("run", "Simulate the closed loop");
  add_common(run, true);
  auto* sweep = app.add_subcommand("sweep", "Run consecutive seeds");
  add_common(sweep, true);
  sweep->add_option("--seeds", o.seeds, "Number of seeds");
  sweep->add_option("--jobs", o.jobs, "Parallel runs");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }

  try {
    if (spectrum->parsed()) return CmdSpectrum(o, out, err);
    if (gains->parsed()) return CmdGains(o, out, err);
    if (oracle->parsed()) return CmdOracle(o, out, err);
    if (run->parsed()) return CmdRun(o, out, err);
    return CmdSweep(o, out, err);
  } catch (const Error& e) {
    err << "error [" << ToString(e.kind()) << "]: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace optcon::cli
