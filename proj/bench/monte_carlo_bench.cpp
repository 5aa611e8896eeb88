/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

// Serial reference vs OpenMP Monte-Carlo runner on the noise-study battery.

#include "gyrocal/monte_carlo.h"

#include <benchmark/benchmark.h>


namespace
{

gyrocal::SimConfig Battery()
{
  gyrocal::SimConfig c;
  c.gyro_scale = gyrocal::Vec3{1.1, 0.9, 1.2};
  c.gyro_bias = gyrocal::Vec3{0, 0, 0};
  c.estimate_bias = false;
  c.redraw_poses = false;
  c.rotation_axis = gyrocal::Vec3{1, 1, 1};
  c.gravity_direction = gyrocal::Vec3{0, 0, 1};
  c.gyro_noise_sigma = {1, 1, 1};
  return c;
}

void BM_Serial(benchmark::State& state)
{
  const gyrocal::SimConfig c = Battery();
  const auto runs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(gyrocal::RunMonteCarloSerial(c, runs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OpenMP(benchmark::State& state)
{
  const gyrocal::SimConfig c = Battery();
  const auto runs = static_cast<std::size_t>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(gyrocal::RunMonteCarlo(c, runs, threads));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = threads;
}

BENCHMARK(BM_Serial)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OpenMP)
    ->ArgsProduct({{1000}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

} // namespace

BENCHMARK_MAIN();
