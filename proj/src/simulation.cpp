/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/simulation.h"

#include "gyrocal/error.h"

#include <cmath>
#include <numbers>
#include <string>

namespace gyrocal
{
namespace
{
constexpr double kDegToRad = std::numbers::pi / 180.0;

// Observability limits for randomly drawn installations.
constexpr double kMinAxisComponent = 0.25;
constexpr double kMinGravityTiltCos = 0.3;
constexpr double kMaxGravityTiltCos = 0.9;

struct Draws
{
  explicit Draws(Rng& rng) : m_rng(rng) {}

  double Unit() { return m_unit(m_rng); }
  double Uniform(const UniformRange& r) { return r.lo + (r.hi - r.lo) * Unit(); }
  Vec3 Uniform3(const UniformRange& r) { return {Uniform(r), Uniform(r), Uniform(r)}; }
  double Normal() { return m_normal(m_rng); }
  Vec3 Normal3() { return {Normal(), Normal(), Normal()}; }

  Vec3 UnitVector()
  {
    for (;;)
    {
      const Vec3 v = Normal3();
      const double n = Norm(v);
      if (n > 1e-6)
        return v / n;
    }
  }

private:
  Rng& m_rng;
  std::uniform_real_distribution<double> m_unit{0.0, 1.0};
  std::normal_distribution<double> m_normal{0.0, 1.0};
};

Vec3 DrawAxis(Draws& draws)
{
  for (;;)
  {
    const Vec3 axis = draws.UnitVector();
    if (std::abs(axis.x) >= kMinAxisComponent && std::abs(axis.y) >= kMinAxisComponent &&
        std::abs(axis.z) >= kMinAxisComponent)
      return axis;
  }
}

Vec3 DrawGravityDirection(Draws& draws, const Vec3& axis)
{
  for (;;)
  {
    const Vec3 g = draws.UnitVector();
    const double c = std::abs(Dot(g, axis));
    if (c >= kMinGravityTiltCos && c <= kMaxGravityTiltCos)
      return g;
  }
}

void RequireRange(const UniformRange& r, const char* key)
{
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
    throw Error(ErrorKind::Config, std::string(key) + ": bounds must be finite and ordered");
}

void RequireNonNegative(double v, const char* key)
{
  if (!std::isfinite(v) || v < 0.0)
    throw Error(ErrorKind::Config, std::string(key) + ": must be >= 0");
}

void RequirePositive(double v, const char* key)
{
  if (!std::isfinite(v) || v <= 0.0)
    throw Error(ErrorKind::Config, std::string(key) + ": must be > 0");
}
} // namespace

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index)
{
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void Validate(const SimConfig& c)
{
  RequireRange(c.gyro_scale_range, "gyro_scale_range");
  RequireRange(c.gyro_bias_range, "gyro_bias_range");
  RequireRange(c.accel_scale_range, "accel_scale_range");
  RequireRange(c.accel_bias_range, "accel_bias_range");
  if (c.gyro_scale_range.lo <= 0.0)
    throw Error(ErrorKind::Config, "gyro_scale_range: scale must be positive");
  if (c.accel_scale_range.lo <= 0.0)
    throw Error(ErrorKind::Config, "accel_scale_range: scale must be positive");
  if (c.gyro_scale)
  {
    for (int a = 0; a < 3; ++a)
      RequirePositive((*c.gyro_scale)[a], "gyro_scale");
  }
  if (c.gyro_bias && !IsFinite(*c.gyro_bias))
    throw Error(ErrorKind::Config, "gyro_bias: must be finite");

  RequireNonNegative(c.accel_noise_sigma, "accel_noise_sigma");
  RequireNonNegative(c.rotor_noise_fraction, "rotor_noise_fraction");
  for (int a = 0; a < 3; ++a)
    RequireNonNegative(c.gyro_noise_sigma[a], "gyro_noise_sigma");
  RequirePositive(c.rotor_speed, "rotor_speed");
  RequirePositive(c.gravity, "gravity");

  if (c.pose_count < 4)
    throw Error(ErrorKind::Config, "pose_count: must be >= 4, got " + std::to_string(c.pose_count));
  if (c.samples_per_pose < 1)
    throw Error(ErrorKind::Config, "samples_per_pose: must be >= 1");
  if (c.static_accel_samples < 1)
    throw Error(ErrorKind::Config, "static_accel_samples: must be >= 1");
  if (c.accel_cal_poses != 0 && c.accel_cal_poses < 6)
    throw Error(ErrorKind::Config, "accel_cal_poses: must be 0 or >= 6");
  if (c.accel_calibration == AccelCalibrationMode::Fit && c.accel_cal_poses < 6)
    throw Error(ErrorKind::Config, "accel_calibration = fit needs accel_cal_poses >= 6");
  if (c.estimate_bias && c.static_gyro_samples < 1)
    throw Error(ErrorKind::Config, "static_gyro_samples: must be >= 1 when estimate_bias = true");
  if (!c.pose_angles_deg.empty() && c.pose_angles_deg.size() != static_cast<std::size_t>(c.pose_count))
    throw Error(ErrorKind::Config, "pose_angles: need exactly pose_count values");

  if (c.rotation_axis && !(Norm(*c.rotation_axis) > 0.0))
    throw Error(ErrorKind::Config, "rotation_axis: must be non-zero");
  if (c.gravity_direction && !(Norm(*c.gravity_direction) > 0.0))
    throw Error(ErrorKind::Config, "gravity_direction: must be non-zero");
  if (!IsFinite(c.lever_arm))
    throw Error(ErrorKind::Config, "lever_arm: must be finite");
}

Quaternion RandomPose(Rng& rng, const Vec3& bodyAxis)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return Quaternion::FromAxisAngle(bodyAxis, 2.0 * std::numbers::pi * unit(rng));
}

Vec3 AddCentrifugal(const Vec3& accel, const Vec3& rateDeg, const Vec3& leverArm)
{
  const Vec3 w = rateDeg * kDegToRad;
  return accel + Cross(w, Cross(w, leverArm));
}

void DrawInstallation(Rng& rng, Vec3& axis, Vec3& gravityDirection)
{
  Draws draws(rng);
  axis = DrawAxis(draws);
  gravityDirection = DrawGravityDirection(draws, axis);
}

SyntheticSession GenerateSession(const SimConfig& c, Rng& rng)
{
  Validate(c);
  Draws draws(rng);

  // Every draw below happens unconditionally and in a fixed order, so configs
  // that differ only in noise levels consume identical random streams.
  SessionTruth truth;
  const Vec3 gyroScale = draws.Uniform3(c.gyro_scale_range);
  const Vec3 gyroBias = draws.Uniform3(c.gyro_bias_range);
  const Vec3 accelScale = draws.Uniform3(c.accel_scale_range);
  const Vec3 accelBias = draws.Uniform3(c.accel_bias_range);
  truth.gyro.scale = c.gyro_scale.value_or(gyroScale);
  truth.gyro.bias = c.gyro_bias.value_or(gyroBias);
  if (c.accel_errors)
    truth.accel = {accelScale, accelBias};

  truth.rotation_axis = c.rotation_axis ? Normalized(*c.rotation_axis) : DrawAxis(draws);
  truth.gravity_direction = c.gravity_direction ? Normalized(*c.gravity_direction)
                                                : DrawGravityDirection(draws, truth.rotation_axis);
  truth.dot_constant = Dot(truth.gravity_direction, truth.rotation_axis) * c.rotor_speed;

  const auto poseCount = static_cast<std::size_t>(c.pose_count);
  truth.pose_angles_deg.resize(poseCount);
  for (std::size_t i = 0; i < poseCount; ++i)
    truth.pose_angles_deg[i] = 360.0 * draws.Unit();
  if (!c.pose_angles_deg.empty())
    truth.pose_angles_deg = c.pose_angles_deg;

  const Vec3 axis = truth.rotation_axis;
  auto gravityAt = [&](double angleDeg) {
    return RotateVector(Quaternion::FromAxisAngle(axis, angleDeg * kDegToRad), truth.gravity_direction);
  };

  SyntheticSession out;
  CalibrationSession& session = out.session;
  session.rotor_speed = c.rotor_speed;
  session.gravity = c.gravity;

  const double accelMeanSigma = c.accel_noise_sigma / std::sqrt(static_cast<double>(c.static_accel_samples));
  const double rootN = std::sqrt(static_cast<double>(c.samples_per_pose));

  session.poses.resize(poseCount);
  for (std::size_t i = 0; i < poseCount; ++i)
  {
    PoseObservation& pose = session.poses[i];
    pose.pose_id = static_cast<int>(i) + 1;

    const Vec3 trueAccel = gravityAt(truth.pose_angles_deg[i]) * c.gravity;
    pose.accel_mean = DistortAccel(truth.accel, trueAccel) + draws.Normal3() * accelMeanSigma;
    pose.accel_sample_count = c.static_accel_samples;

    const double rate = c.rotor_speed * (1.0 + c.rotor_noise_fraction * draws.Normal() / rootN);
    const Vec3 gyroNoise = Hadamard(draws.Normal3(), c.gyro_noise_sigma) / rootN;
    pose.gyro_mean = DistortGyro(truth.gyro, axis * rate) + gyroNoise;
    pose.sample_count = c.samples_per_pose;
  }

  const Vec3 offset = ZeroRateOffset(truth.gyro);
  session.static_gyro.reserve(c.static_gyro_samples);
  for (std::size_t k = 0; k < c.static_gyro_samples; ++k)
    session.static_gyro.push_back(offset + Hadamard(draws.Normal3(), c.gyro_noise_sigma));

  for (std::size_t k = 0; k < c.accel_cal_poses; ++k)
  {
    StaticAccelObservation obs;
    obs.pose_id = static_cast<int>(poseCount + 1 + k);
    const Vec3 trueAccel = draws.UnitVector() * c.gravity;
    obs.accel_mean = DistortAccel(truth.accel, trueAccel) + draws.Normal3() * accelMeanSigma;
    obs.sample_count = c.static_accel_samples;
    session.accel_only_poses.push_back(obs);
  }

  if (c.raw_rotating_samples > 0)
  {
    const std::size_t n = c.raw_rotating_samples;
    const double revolution = 360.0 / c.rotor_speed;
    for (std::size_t i = 0; i < poseCount; ++i)
    {
      PoseObservation& pose = session.poses[i];
      pose.rotating_samples.resize(n);
      std::vector<Vec3> gyros(n);
      for (std::size_t k = 0; k < n; ++k)
      {
        const double fraction = static_cast<double>(k) / static_cast<double>(n);
        const double rate = c.rotor_speed * (1.0 + c.rotor_noise_fraction * draws.Normal());
        const Vec3 rateVec = axis * rate;
        Vec3 trueAccel = gravityAt(truth.pose_angles_deg[i] + 360.0 * fraction) * c.gravity;
        if (c.centrifugal)
          trueAccel = AddCentrifugal(trueAccel, rateVec, c.lever_arm);

        RotatingSample& sample = pose.rotating_samples[k];
        sample.time = revolution * fraction;
        sample.gyro = DistortGyro(truth.gyro, rateVec) + Hadamard(draws.Normal3(), c.gyro_noise_sigma);
        sample.accel = DistortAccel(truth.accel, trueAccel) + draws.Normal3() * c.accel_noise_sigma;
        gyros[k] = sample.gyro;
      }
      pose.gyro_mean = ComponentMean(gyros);
      pose.sample_count = n;
    }
  }

  out.truth = std::move(truth);
  return out;
}

SyntheticSession GenerateSession(const SimConfig& config)
{
  Rng rng(config.seed);
  return GenerateSession(config, rng);
}

} // namespace gyrocal
