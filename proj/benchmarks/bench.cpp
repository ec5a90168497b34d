#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "thingc/dsl.hpp"
#include "thingc/events.hpp"
#include "thingc/random_model.hpp"
#include "thingc/sim.hpp"
#include "thingc/transform.hpp"
#include "thingc/validate.hpp"

using namespace thingc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string corpus(const std::string& name) {
  return slurp(std::string(THINGC_CORPUS_DIR) + "/" + name);
}

Model load(const std::string& name) { return *parse(corpus(name)).model; }

void BM_Parse(benchmark::State& state) {
  std::string text = corpus("box_arrival.tm");
  for (auto _ : state) {
    auto r = parse(text);
    benchmark::DoNotOptimize(r.model);
  }
}
BENCHMARK(BM_Parse);

void BM_Validate(benchmark::State& state) {
  Model m = load("box_arrival.tm");
  for (auto _ : state) {
    auto diags = validate_model(m, {});
    benchmark::DoNotOptimize(diags);
  }
}
BENCHMARK(BM_Validate);

void BM_SimplifyLevel1(benchmark::State& state) {
  Model m = load("box_arrival.tm");
  for (auto _ : state) {
    auto r = simplify_level1(m);
    benchmark::DoNotOptimize(r.model);
  }
}
BENCHMARK(BM_SimplifyLevel1);

void BM_SimplifyLevel2(benchmark::State& state) {
  Model m = load("box_arrival.tm");
  for (auto _ : state) {
    auto r = simplify_level2(m);
    benchmark::DoNotOptimize(r.model);
  }
}
BENCHMARK(BM_SimplifyLevel2);

void BM_BuildBehavior(benchmark::State& state) {
  Model m = load("control_light.tm");
  for (auto _ : state) {
    auto g = build_behavior(m, m.events);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_BuildBehavior);

void BM_Simulate(benchmark::State& state) {
  Model m = load("control_light.tm");
  auto sr = load_scenario(corpus("control_light_press.tms"), m);
  for (auto _ : state) {
    auto r = simulate(m, *sr.scenario);
    benchmark::DoNotOptimize(r.trace);
  }
}
BENCHMARK(BM_Simulate);

void BM_RandomModelRoundTrip(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Model m = random_model(seed++);
    auto r = parse(serialize(m));
    benchmark::DoNotOptimize(r.model);
  }
}
BENCHMARK(BM_RandomModelRoundTrip);

}  // namespace

BENCHMARK_MAIN();
