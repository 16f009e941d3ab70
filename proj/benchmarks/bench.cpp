#include <random>

#include "benchmark/benchmark.h"
#include "ctc/broadcast.hpp"
#include "ctc/combnet.hpp"
#include "ctc/field.hpp"
#include "ctc/pliable.hpp"
#include "ctc/regions.hpp"
#include "ctc/rng.hpp"

namespace {

void BM_rank(benchmark::State& state) {
  const ctc::gf::PrimeField f(65537);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(42);
  ctc::gf::Matrix m(f, n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      m(r, c) = static_cast<ctc::gf::Element>(rng() % 65537);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctc::gf::rank(m));
  }
}
BENCHMARK(BM_rank)->Arg(16)->Arg(64)->Arg(128);

void BM_content_trial_counting(benchmark::State& state) {
  const ctc::broadcast::ChannelParams ch(0.4, 0.3);
  const ctc::broadcast::Workload w(static_cast<std::size_t>(state.range(0)),
                                   static_cast<std::size_t>(state.range(0)), 0.85);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctc::broadcast::simulate_content_type(
        ch, w, seed++, ctc::broadcast::Mode::counting));
  }
}
BENCHMARK(BM_content_trial_counting)->Arg(1000)->Arg(10000);

void BM_content_trial_coded(benchmark::State& state) {
  const ctc::broadcast::ChannelParams ch(0.4, 0.3);
  const ctc::broadcast::Workload w(static_cast<std::size_t>(state.range(0)),
                                   static_cast<std::size_t>(state.range(0)), 0.85);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctc::broadcast::simulate_content_type(
        ch, w, seed++, ctc::broadcast::Mode::coded));
  }
}
BENCHMARK(BM_content_trial_coded)->Arg(100)->Arg(200);

void BM_average_rate_trial(benchmark::State& state) {
  const auto net = ctc::combnet::build(2, 6, 8);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctc::combnet::estimate_average_rate(net, 10, seed++));
  }
}
BENCHMARK(BM_average_rate_trial);

void BM_min_code_length_complete3(benchmark::State& state) {
  const ctc::gf::PrimeField f2(2);
  const auto inst = ctc::pliable::Instance::complete(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctc::pliable::min_code_length(inst, f2, 4));
  }
}
BENCHMARK(BM_min_code_length_complete3);

void BM_boundary_trace(benchmark::State& state) {
  const auto ch = ctc::regions::derive_channel(0.4, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctc::regions::boundary_trace(ch, 0.85, ctc::regions::RegionKind::content, 64));
  }
}
BENCHMARK(BM_boundary_trace);

}  // namespace

BENCHMARK_MAIN();
