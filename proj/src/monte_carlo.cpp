/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/monte_carlo.h"

#include "gyrocal/error.h"

#include <algorithm>
#include <string>

#include <omp.h>

namespace gyrocal
{
namespace
{
// Stream 0 of the master seed is reserved for the battery; run i uses i + 1.
constexpr std::uint64_t kBatteryStream = 0;

SummaryStats SummarizeAny(const std::vector<double>& values)
{
  if (values.size() >= 2)
    return Summarize(values);

  SummaryStats s;
  s.n = values.size();
  s.degenerate = true;
  if (!values.empty())
  {
    s.mean = s.min = s.max = values.front();
    s.mean_abs = std::abs(values.front());
  }
  return s;
}

MonteCarloReport Aggregate(const SimConfig& battery, std::vector<RunResult> results)
{
  MonteCarloReport report;
  report.runs = results.size();
  report.rotation_axis = Normalized(*battery.rotation_axis);
  report.gravity_direction = Normalized(*battery.gravity_direction);

  std::array<std::vector<double>, 3> scale, scaleError, uncalibrated, biasError;
  for (const RunResult& r : results)
  {
    if (!r.ok)
    {
      ++report.failures;
      continue;
    }
    report.max_normal_residual = std::max(report.max_normal_residual, r.normal_residual);
    for (int a = 0; a < 3; ++a)
    {
      scale[a].push_back(r.scale[a]);
      scaleError[a].push_back(r.scale[a] - r.true_scale[a]);
      uncalibrated[a].push_back(1.0 - r.true_scale[a]);
      biasError[a].push_back(r.bias[a] - r.true_bias[a]);
    }
  }

  if (static_cast<double>(report.failures) > kMaxFailureFraction * static_cast<double>(report.runs))
  {
    std::string first;
    for (const RunResult& r : results)
    {
      if (!r.ok)
      {
        first = r.error;
        break;
      }
    }
    throw Error(ErrorKind::TooManyFailures, std::to_string(report.failures) + " of " +
                                                std::to_string(report.runs) +
                                                " runs failed; first error: " + first);
  }

  for (int a = 0; a < 3; ++a)
  {
    report.scale[a] = SummarizeAny(scale[a]);
    report.scale_error[a] = SummarizeAny(scaleError[a]);
    report.uncalibrated_error[a] = SummarizeAny(uncalibrated[a]);
    report.bias_error[a] = SummarizeAny(biasError[a]);
  }
  report.results = std::move(results);
  return report;
}
} // namespace

SimConfig ResolveBattery(const SimConfig& config)
{
  Validate(config);
  SimConfig battery = config;
  Rng rng(DeriveSeed(config.seed, kBatteryStream));

  Vec3 axis;
  Vec3 gravity;
  DrawInstallation(rng, axis, gravity);
  if (!battery.rotation_axis)
    battery.rotation_axis = axis;
  if (!battery.gravity_direction)
    battery.gravity_direction = gravity;

  if (!battery.redraw_poses && battery.pose_angles_deg.empty())
  {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < battery.pose_count; ++i)
      battery.pose_angles_deg.push_back(360.0 * unit(rng));
  }
  return battery;
}

RunResult RunTrial(const SimConfig& battery, std::size_t run)
{
  RunResult result;
  try
  {
    Rng rng(DeriveSeed(battery.seed, run + 1));
    const SyntheticSession synthetic = GenerateSession(battery, rng);
    result.true_scale = synthetic.truth.gyro.scale;
    result.true_bias = synthetic.truth.gyro.bias;
    result.true_dot_constant = synthetic.truth.dot_constant;

    AccelParams accel = AccelParams::Identity();
    if (battery.accel_calibration == AccelCalibrationMode::Fit)
      accel = FitAccelParams(StaticAccelMeans(synthetic.session), synthetic.session.gravity);

    CalibrationOptions options;
    if (!battery.estimate_bias)
      options.zero_rate_offset = ZeroRateOffset(synthetic.truth.gyro);

    const ScaleEstimate estimate = CalibrateGyroscope(synthetic.session, accel, options);
    result.scale = estimate.params.scale;
    result.bias = estimate.params.bias;
    result.dot_constant = estimate.dot_constant;
    result.normal_residual = estimate.normal_residual;
    result.ok = true;
  }
  catch (const Error& e)
  {
    result.ok = false;
    result.error = e.what();
  }
  return result;
}

MonteCarloReport RunMonteCarlo(const SimConfig& config, std::size_t runs, int threads)
{
  if (runs < 1)
    throw Error(ErrorKind::InvalidArgument, "runs must be >= 1");
  const SimConfig battery = ResolveBattery(config);
  std::vector<RunResult> results(runs);

  const int count = static_cast<int>(runs);
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(team)
  for (int i = 0; i < count; ++i)
    results[static_cast<std::size_t>(i)] = RunTrial(battery, static_cast<std::size_t>(i));

  return Aggregate(battery, std::move(results));
}

MonteCarloReport RunMonteCarloSerial(const SimConfig& config, std::size_t runs)
{
  if (runs < 1)
    throw Error(ErrorKind::InvalidArgument, "runs must be >= 1");
  const SimConfig battery = ResolveBattery(config);
  std::vector<RunResult> results(runs);
  for (std::size_t i = 0; i < runs; ++i)
    results[i] = RunTrial(battery, i);
  return Aggregate(battery, std::move(results));
}

} // namespace gyrocal
