// Microbenchmarks for the hot paths: generator construction, the design
// cost and its gradient, the pilot search, and the per-realization pieces
// of the simulation loop.
#include <benchmark/benchmark.h>

#include "uwofdm/airlink.hpp"
#include "uwofdm/design.hpp"
#include "uwofdm/estimator.hpp"
#include "uwofdm/genmat.hpp"
#include "uwofdm/rng.hpp"
#include "uwofdm/sysmodel.hpp"

using namespace uwofdm;

namespace {

const SystemConfig& cfg() {
  static const SystemConfig c = reference_uw_config();
  return c;
}

const CarrierMaps& maps() {
  static const CarrierMaps m = build_carrier_maps(cfg());
  return m;
}

const cxmat& perm_a() {
  static const cxmat a = permutation_init(maps(), cfg());
  return a;
}

const GeneratorSet& gens() {
  static const GeneratorSet g = [] {
    GeneratorSet s;
    s.g_d = scale_G_d(build_G_d(perm_a(), maps(), cfg()), cfg());
    s.g_p = build_G_p(maps(), cfg());
    s.p = optimize_pilots(s.g_p, 20).p;
    s.alpha = cfg().alpha();
    s.mode = cfg().mode;
    return s;
  }();
  return g;
}

void bm_build_g_d(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(build_G_d(perm_a(), maps(), cfg()));
}
BENCHMARK(bm_build_g_d);

void bm_cost_eval(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(cost_Jd(perm_a(), maps(), cfg()));
}
BENCHMARK(bm_cost_eval);

void bm_cost_gradient(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(cost_gradient(perm_a(), maps(), cfg(), false));
}
BENCHMARK(bm_cost_gradient);

void bm_descent_30(benchmark::State& state) {
  DescentOptions opts;
  opts.max_iters = 30;
  for (auto _ : state)
    benchmark::DoNotOptimize(optimize_Ad(perm_a(), maps(), cfg(), opts));
}
BENCHMARK(bm_descent_30)->Unit(benchmark::kMillisecond);

void bm_pilot_search(benchmark::State& state) {
  const cxmat g_p = build_G_p(maps(), cfg());
  const int cardinality = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(optimize_pilots(g_p, cardinality));
  state.SetItemsProcessed(state.iterations() * 2 *
                          static_cast<long>(std::pow(cardinality, 4)));
}
BENCHMARK(bm_pilot_search)->Arg(4)->Arg(20)->Unit(benchmark::kMicrosecond);

void bm_cfo_freq_matrix(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(cfo_freq_matrix(0.1, 3, maps(), cfg()));
}
BENCHMARK(bm_cfo_freq_matrix);

void bm_draw_channel(benchmark::State& state) {
  Rng rng(5);
  for (auto _ : state)
    benchmark::DoNotOptimize(draw_channel(rng, cfg().tau_rms, maps(), cfg()));
}
BENCHMARK(bm_draw_channel);

void bm_receive_exact(benchmark::State& state) {
  Rng rng(6);
  const UniqueWord uw = make_uw(UwKind::cazac, maps(), cfg());
  const ChannelRealization chan = draw_channel(rng, cfg().tau_rms, maps(), cfg());
  std::vector<cxvec> data;
  for (int l = 0; l < 4; ++l) data.push_back(rng.qpsk(cfg().n_d));
  for (auto _ : state)
    benchmark::DoNotOptimize(receive_exact(data, gens(), uw, chan, 0.05, 0.0,
                                           rng, maps(), cfg()));
}
BENCHMARK(bm_receive_exact)->Unit(benchmark::kMicrosecond);

void bm_lmmse(benchmark::State& state) {
  Rng rng(7);
  const UniqueWord uw = make_uw(UwKind::zero, maps(), cfg());
  const ChannelRealization chan = draw_channel(rng, cfg().tau_rms, maps(), cfg());
  const std::vector<cxvec> data{rng.qpsk(cfg().n_d)};
  const auto y =
      receive_exact(data, gens(), uw, chan, 0.0, 0.0, rng, maps(), cfg());
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lmmse_data_estimate(y[0], gens().g_d, chan.h_nz, 1e-3, cfg()));
}
BENCHMARK(bm_lmmse);

}  // namespace

BENCHMARK_MAIN();
