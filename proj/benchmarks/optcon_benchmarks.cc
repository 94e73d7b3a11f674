#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "optcon/costs.h"
#include "optcon/generator.h"
#include "optcon/graph.h"
#include "optcon/random.h"
#include "optcon/scenario.h"
#include "optcon/sim.h"

namespace {

using namespace optcon;

Scenario Load(const std::string& name) {
  return ParseScenario(
      ReadTextFile(std::string(OPTCON_SCENARIO_DIR) + "/" + name + ".json"),
      {});
}

// Ring of n nodes with every node also linked to its opposite, both ways.
Digraph Ring(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    edges.push_back({i, (i + 1) % n, 1.0});
    edges.push_back({(i + 1) % n, i, 1.0});
  }
  return Digraph::FromEdges(n, edges);
}

void BM_Spectrum(benchmark::State& state) {
  const Digraph g = Ring(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(BuildLaplacian(g));
}
BENCHMARK(BM_Spectrum)->Arg(4)->Arg(16)->Arg(64);

void BM_GeneratorField(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Digraph g = Ring(n);
  std::vector<CostFunction> fs;
  Rng rng(5);
  GeneratorState s{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    fs.push_back(CostFunction::Quadratic(rng.Uniform01()));
    s.r(i) = rng.Uniform01();
    s.v(i) = rng.Uniform01();
  }
  const CostEnsemble costs(fs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GeneratorField(s, costs, g, {1.0, 15.0}));
  }
}
BENCHMARK(BM_GeneratorField)->Arg(4)->Arg(64)->Arg(256);

void BM_ClosedLoopField(benchmark::State& state, const char* name) {
  const Scenario sc = Load(name);
  ClosedLoopField field(sc, sc.gains);
  const Eigen::VectorXd s = InitialState(sc);
  Eigen::VectorXd ds(field.dimension());
  for (auto _ : state) {
    field.Evaluate(s, ds);
    benchmark::DoNotOptimize(ds.data());
  }
}
BENCHMARK_CAPTURE(BM_ClosedLoopField, example1, "example1");
BENCHMARK_CAPTURE(BM_ClosedLoopField, example2, "example2");

void BM_ShortRun(benchmark::State& state, const char* name) {
  Scenario sc = Load(name);
  sc.integrator.horizon = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(RunClosedLoop(sc));
}
BENCHMARK_CAPTURE(BM_ShortRun, example1, "example1")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ShortRun, example2, "example2")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
