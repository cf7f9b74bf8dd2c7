#include <benchmark/benchmark.h>

#include "milnor/builders.hpp"
#include "milnor/degree.hpp"
#include "milnor/diagram.hpp"
#include "milnor/magnus.hpp"
#include "milnor/quadrature.hpp"

namespace {

using namespace milnor;

// Borromean link refined so every piece is at most h long.
StringLink refined_borromean(double h) {
  const StringLink link = make_borromean();
  return h > 0.0 ? resample(link, h) : link;
}

double step_for(std::int64_t arg) { return arg == 0 ? 0.0 : 1.0 / double(arg); }

void BM_Project(benchmark::State& state) {
  const StringLink link = refined_borromean(step_for(state.range(0)));
  const Vec3 dir = Vec3(0.03, -0.02, 1.0).normalized();
  for (auto _ : state) benchmark::DoNotOptimize(project(link, dir));
  state.counters["pieces"] = double(link.segment_count());
}
BENCHMARK(BM_Project)->Arg(0)->Arg(20)->Arg(80);

void BM_MagnusMu123(benchmark::State& state) {
  const LinkDiagram d = project(make_borromean(), Vec3::UnitZ());
  const MuIndices idx = parse_mu_indices("1,2;3");
  for (auto _ : state) benchmark::DoNotOptimize(mu(d, idx, int(state.range(0))));
}
BENCHMARK(BM_MagnusMu123)->Arg(2)->Arg(3);

void BM_DegreeMu123(benchmark::State& state) {
  const StringLink link = refined_borromean(step_for(state.range(0)));
  const RegularValue rv = pick_regular_value(link, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mu123_degree(link, rv, 1));
  state.counters["pieces"] = double(link.segment_count());
}
BENCHMARK(BM_DegreeMu123)->Arg(0)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SolveT(benchmark::State& state) {
  const StringLink link = refined_borromean(step_for(state.range(0)));
  const RegularValue rv = pick_regular_value(link, 1);
  DegreeOptions options;
  options.threads = unsigned(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve_T(link, rv, options));
}
BENCHMARK(BM_SolveT)->Args({20, 1})->Args({20, 4})->Unit(benchmark::kMillisecond);

void BM_RandomBraidOracles(benchmark::State& state) {
  auto rng = make_rng(1, "bench");
  std::vector<StringLink> links;
  for (int n = 0; n < 16; ++n) links.push_back(from_braid(random_pure_braid(rng), 3));
  for (auto _ : state)
    for (const auto& link : links) {
      benchmark::DoNotOptimize(mu123_degree(link, std::nullopt, 0).value);
      benchmark::DoNotOptimize(mu(link, parse_mu_indices("1,2;3")));
    }
  state.SetItemsProcessed(state.iterations() * std::int64_t(links.size()));
}
BENCHMARK(BM_RandomBraidOracles)->Unit(benchmark::kMillisecond);

void BM_McEstimate(benchmark::State& state) {
  const StringLink link = make_borromean();
  const FormTriple forms = default_forms();
  McOptions options;
  options.samples = std::uint64_t(state.range(0));
  options.threads = unsigned(state.range(1));
  options.sampling = state.range(2) ? Sampling::Uniform : Sampling::Importance;
  for (auto _ : state) benchmark::DoNotOptimize(mc_estimate(link, Diagram::M, forms, options));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McEstimate)
    ->Args({100000, 1, 0})
    ->Args({100000, 4, 0})
    ->Args({100000, 1, 1})
    ->Unit(benchmark::kMillisecond);

void BM_IntegrandT(benchmark::State& state) {
  const StringLink link = make_borromean();
  const FormTriple forms = default_forms();
  const Configuration config(link, integration_tail_length(link, forms));
  const std::array<double, 6> params{3.5, 4.2, 5.1, 0.0, 0.0, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(integrand(config, Diagram::T, forms, params));
}
BENCHMARK(BM_IntegrandT);

}  // namespace

BENCHMARK_MAIN();
