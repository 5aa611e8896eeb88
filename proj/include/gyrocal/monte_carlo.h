/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/simulation.h"
#include "gyrocal/stats.h"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace gyrocal
{

struct RunResult
{
  bool ok = false;
  std::string error;
  Vec3 true_scale;
  Vec3 true_bias;
  Vec3 scale;
  Vec3 bias;
  double true_dot_constant = 0.0;
  double dot_constant = 0.0;
  double normal_residual = 0.0;
};

struct MonteCarloReport
{
  std::size_t runs = 0;
  std::size_t failures = 0;
  Vec3 rotation_axis;
  Vec3 gravity_direction;

  std::array<SummaryStats, 3> scale{};              // estimated K per axis
  std::array<SummaryStats, 3> scale_error{};        // K_est - K_true
  std::array<SummaryStats, 3> uncalibrated_error{}; // 1 - K_true
  std::array<SummaryStats, 3> bias_error{};         // b_est - b_true, deg/s
  double max_normal_residual = 0.0;

  std::vector<RunResult> results; // indexed by run
};

/// Failure budget: a battery with more failed runs than this fraction throws.
inline constexpr double kMaxFailureFraction = 0.10;

/// Fixes the per-battery quantities (rotation axis, installation and, when
/// redraw_poses is false, rotor angles) from the master seed.
SimConfig ResolveBattery(const SimConfig& config);

/// One simulate-and-calibrate trial of a resolved battery. Never throws for
/// calibration failures; they are reported in the result.
RunResult RunTrial(const SimConfig& battery, std::size_t run);

/// OpenMP-parallel battery. threads <= 0 uses the OpenMP default. The result
/// is bit-identical to RunMonteCarloSerial for any thread count.
MonteCarloReport RunMonteCarlo(const SimConfig& config, std::size_t runs, int threads = 0);

/// Serial reference implementation.
MonteCarloReport RunMonteCarloSerial(const SimConfig& config, std::size_t runs);

} // namespace gyrocal
