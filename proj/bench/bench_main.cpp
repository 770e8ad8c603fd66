// Serial reference against the OpenMP kernels, and cell-list against
// brute-force pair search. Set HOPNET_THREADS to pin the parallel width.

#include "hopnet/conductivity.hpp"
#include "hopnet/crossings.hpp"
#include "hopnet/fkg.hpp"
#include "hopnet/graph.hpp"
#include "hopnet/mott_walk.hpp"
#include "hopnet/percolation.hpp"
#include "hopnet/point_process.hpp"

#include <benchmark/benchmark.h>

using namespace hopnet;

namespace {

const EnergyLaw kUniform = EnergyLaw::signed_power(1.0, 0.0);

Execution mode(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "openmp" : "serial"); }

void BM_CrossingProbability(benchmark::State& s) {
    const PppModel m{1.0, kUniform, 2, 3.8, 4.0};
    for (auto _ : s) benchmark::DoNotOptimize(crossing_probability(m, 24.0, 64, {1, 0}, mode(s)));
    label(s);
}
BENCHMARK(BM_CrossingProbability)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ZetaThreshold(benchmark::State& s) {
    BisectionOptions o;
    o.replicas = 100;
    o.execution = mode(s);
    for (auto _ : s) benchmark::DoNotOptimize(estimate_zeta_c(4.0, 1.0, kUniform, 2, 64.0, o, {2, 0}));
    label(s);
}
BENCHMARK(BM_ZetaThreshold)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CrossingDensity(benchmark::State& s) {
    const PppModel m{24.0, EnergyLaw::positive_power(1.0, 0.0), 2, 1.0, 1.0};
    for (auto _ : s) benchmark::DoNotOptimize(crossing_density_scan(m, {8.0, 16.0}, 16, {3, 0}, mode(s)));
    label(s);
}
BENCHMARK(BM_CrossingDensity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MottScan(benchmark::State& s) {
    MottScanPlan p;
    p.betas = {2.0, 4.0, 8.0};
    p.lambda_star = 13.9;
    p.replicas = 8;
    p.execution = mode(s);
    for (auto _ : s) benchmark::DoNotOptimize(mott_scan(p));
    label(s);
}
BENCHMARK(BM_MottScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Walk(benchmark::State& s) {
    WalkExperiment w;
    w.trajectories = 64;
    w.walk.record_path = false;
    w.execution = mode(s);
    for (auto _ : s) benchmark::DoNotOptimize(run_walk_experiment(w));
    label(s);
}
BENCHMARK(BM_Walk)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Fkg(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(fkg_probabilities(1'000'000, {4, 0}, mode(s)));
    label(s);
}
BENCHMARK(BM_Fkg)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ThresholdGraph(benchmark::State& s) {
    const auto c = sample_marked_ppp(1.0, kUniform, Box::centered(2, static_cast<double>(s.range(1))), {5, 0});
    const auto how = s.range(0) ? PairSearch::cell_list : PairSearch::brute_force;
    for (auto _ : s) benchmark::DoNotOptimize(build_threshold_graph(c, 4.0, 2.0, how));
    s.SetLabel(std::string(s.range(0) ? "cell_list" : "brute_force") + " n=" + std::to_string(c.size()));
}
BENCHMARK(BM_ThresholdGraph)->ArgsProduct({{0, 1}, {10, 20, 40}})->Unit(benchmark::kMillisecond);

void BM_BooleanGraph(benchmark::State& s) {
    const auto c = sample_marked_ppp(4.0, kUniform, Box::centered(2, static_cast<double>(s.range(1))), {6, 0});
    std::vector<Point> pts;
    for (const auto& p : c.points) pts.push_back(p.x);
    const auto how = s.range(0) ? PairSearch::cell_list : PairSearch::brute_force;
    for (auto _ : s) benchmark::DoNotOptimize(build_boolean_graph(pts, 2, 0.5, how));
    s.SetLabel(std::string(s.range(0) ? "cell_list" : "brute_force") + " n=" + std::to_string(pts.size()));
}
BENCHMARK(BM_BooleanGraph)->ArgsProduct({{0, 1}, {10, 20}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
