#include <benchmark/benchmark.h>

#include <cmath>

#include "risfso/channel.hpp"
#include "risfso/meijer_g.hpp"
#include "risfso/metrics.hpp"
#include "risfso/simulator.hpp"
#include "risfso/special_functions.hpp"
#include "risfso/statistics.hpp"

using namespace risfso;

namespace
{
statistics::SnrDistribution make(int a, double zeta, double mean_db)
{
    double const hop = std::pow(10.0, mean_db / 20.0);
    auto const mode = a == 1 ? channel::DetectionMode::heterodyne() : channel::DetectionMode::im_dd();
    return statistics::SnrDistribution(channel::cascade_params(10.9537, 2.9833, zeta, mode, hop, hop));
}

void bm_bessel_k(benchmark::State& state)
{
    double x = 0.1;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(special::bessel_k(2.3, x));
        x = x < 30.0 ? x * 1.1 : 0.1;
    }
}
BENCHMARK(bm_bessel_k);

void bm_meijer_exp(benchmark::State& state)
{
    special::MeijerGOptions opt;
    opt.allow_shortcuts = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(special::meijer_g({1, 0, {}, {0.0}, 2.5}, opt).value);
}
BENCHMARK(bm_meijer_exp);

void bm_cdf(benchmark::State& state)
{
    auto const d = make(static_cast<int>(state.range(0)), 6.1, 30.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(d.cdf(100.0));
}
BENCHMARK(bm_cdf)->Arg(1)->Arg(2);

void bm_capacity(benchmark::State& state)
{
    auto const d = make(static_cast<int>(state.range(0)), 6.1, 35.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(metrics::ergodic_capacity(d));
}
BENCHMARK(bm_capacity)->Arg(1)->Arg(2);

void bm_ber_dbpsk(benchmark::State& state)
{
    auto const d = make(static_cast<int>(state.range(0)), 1.1, 40.0);
    auto const m = metrics::modulation(metrics::Scheme::dbpsk);
    for (auto _ : state)
        benchmark::DoNotOptimize(metrics::average_ber(d, m));
}
BENCHMARK(bm_ber_dbpsk)->Arg(1)->Arg(2);

void bm_mc_samples(benchmark::State& state)
{
    double const hop = std::pow(10.0, 1.0);
    simulator::McChannel ch;
    ch.h = {10.9537, 2.9833, 6.1, 1.0, hop};
    ch.g = ch.h;
    simulator::McConfig cfg;
    cfg.sample_count = static_cast<std::uint64_t>(state.range(0));
    cfg.seed = 42;
    cfg.threads = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulator::sample_snr(ch, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_mc_samples)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
