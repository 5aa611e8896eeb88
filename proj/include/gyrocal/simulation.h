/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/calibration.h"
#include "gyrocal/quaternion.h"
#include "gyrocal/sensor_models.h"
#include "gyrocal/vec3.h"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace gyrocal
{

using Rng = std::mt19937_64;

/// Seed for stream `index` of a master seed (SplitMix64 finalizer). Streams
/// are independent of the order in which they are consumed.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index);

struct UniformRange
{
  double lo = 0.0;
  double hi = 0.0;
};

enum class AccelCalibrationMode
{
  Identity, // use raw accelerometer means
  Fit,      // sphere-fit the static accel means first
};

/// Simulation setup. Defaults reproduce the ideal-accelerometer study: gyro
/// scale U(0.9, 1.1), bias U(-2, 2) deg/s, accel noise 0.005 m/s^2, rotor
/// noise N(0, (0.05 w)^2). All sigmas are per raw sample; pose means average
/// `samples_per_pose` of them.
struct SimConfig
{
  UniformRange gyro_scale_range{0.9, 1.1};
  std::optional<Vec3> gyro_scale; // fixed value overrides the range
  UniformRange gyro_bias_range{-2.0, 2.0};
  std::optional<Vec3> gyro_bias;

  bool accel_errors = false; // false: ideal accelerometer
  UniformRange accel_scale_range{0.95, 1.05};
  UniformRange accel_bias_range{-0.005, 0.005};

  double accel_noise_sigma = 0.005; // m/s^2
  double rotor_speed = 10.0;        // deg/s
  double rotor_noise_fraction = 0.05;
  Vec3 gyro_noise_sigma{0.01, 0.01, 0.01}; // deg/s

  int pose_count = 8;
  std::size_t samples_per_pose = 10000;
  std::size_t static_accel_samples = 1000;
  std::size_t static_gyro_samples = 10000;
  std::size_t accel_cal_poses = 12;
  std::size_t raw_rotating_samples = 0; // per pose; 0 keeps means only

  std::optional<Vec3> rotation_axis;     // body frame; random when unset
  std::optional<Vec3> gravity_direction; // body frame at rotor angle 0
  std::vector<double> pose_angles_deg;   // fixed rotor angles; random when empty
  bool redraw_poses = true;              // Monte-Carlo: new rotor angles per run
  bool estimate_bias = true;             // false: offset is known (pre-removed)
  AccelCalibrationMode accel_calibration = AccelCalibrationMode::Identity;

  bool centrifugal = false;
  Vec3 lever_arm{0.1, 0.0, 0.0}; // m, body frame, from a point on the axis

  double gravity = 9.80665;
  std::uint64_t seed = 42;
};

/// Throws Config on invalid values.
void Validate(const SimConfig& config);

struct SessionTruth
{
  GyroParams gyro;
  AccelParams accel; // calibration mapping raw accel back to truth
  Vec3 rotation_axis;
  Vec3 gravity_direction;
  double dot_constant = 0.0; // true L = gravity_direction . axis * rotor speed
  std::vector<double> pose_angles_deg;
};

struct SyntheticSession
{
  CalibrationSession session;
  SessionTruth truth;
};

/// Uniformly random rotation about bodyAxis. The axis itself is left fixed.
Quaternion RandomPose(Rng& rng, const Vec3& bodyAxis);

/// Adds the centrifugal specific force w x (w x r) sensed at lever arm r while
/// turning at w (deg/s). The added term is orthogonal to w.
Vec3 AddCentrifugal(const Vec3& accel, const Vec3& rateDeg, const Vec3& leverArm);

/// Draws an observable axis / installation pair: every axis component of the
/// rotation axis is at least 0.25 in magnitude and the gravity tilt keeps
/// |cos| in [0.3, 0.9].
void DrawInstallation(Rng& rng, Vec3& axis, Vec3& gravityDirection);

SyntheticSession GenerateSession(const SimConfig& config, Rng& rng);

/// Convenience overload seeding from config.seed.
SyntheticSession GenerateSession(const SimConfig& config);

} // namespace gyrocal
