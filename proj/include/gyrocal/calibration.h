/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/sensor_models.h"
#include "gyrocal/vec3.h"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gyrocal
{

/// One raw IMU sample recorded while the rotor turns.
struct RotatingSample
{
  double time = 0.0; // s
  Vec3 gyro;         // raw, deg/s
  Vec3 accel;        // raw, m/s^2

  friend bool operator==(const RotatingSample&, const RotatingSample&) = default;
};

/// One mounting pose: the static accelerometer mean at that pose paired with
/// the mean raw gyro output while the rotor turns at constant speed.
struct PoseObservation
{
  int pose_id = 0;
  Vec3 accel_mean; // raw, m/s^2
  std::size_t accel_sample_count = 1;
  Vec3 gyro_mean; // raw, deg/s
  std::size_t sample_count = 1;
  // Optional raw rows behind gyro_mean. Needed for per-sample design rows and
  // for the static-vs-rotating accelerometer comparison.
  std::vector<RotatingSample> rotating_samples;

  friend bool operator==(const PoseObservation&, const PoseObservation&) = default;
};

/// Static accelerometer pose without a matching rotation, used only for the
/// accelerometer pre-calibration.
struct StaticAccelObservation
{
  int pose_id = 0;
  Vec3 accel_mean;
  std::size_t sample_count = 1;

  friend bool operator==(const StaticAccelObservation&, const StaticAccelObservation&) = default;
};

struct CalibrationSession
{
  std::vector<PoseObservation> poses;
  double rotor_speed = 0.0; // deg/s
  double gravity = 9.80665; // m/s^2
  std::vector<Vec3> static_gyro;
  std::vector<StaticAccelObservation> accel_only_poses;

  friend bool operator==(const CalibrationSession&, const CalibrationSession&) = default;
};

enum class RowMode
{
  PerPose,   // one design row per pose (static accel mean x rotating gyro mean)
  PerSample, // one design row per rotating sample, paired with its own accel
};

struct CalibrationOptions
{
  RowMode rows = RowMode::PerPose;
  // Design matrices whose 2-norm condition number exceeds this are rejected.
  double max_condition = 1e8;
  // Fewer static gyro samples than this produces a warning, not an error.
  std::size_t static_sample_warning = 100;
  // When set, used in place of the static-data offset estimate.
  std::optional<Vec3> zero_rate_offset;
};

/// Gravity-normalized calibrated acceleration paired with a raw gyro reading:
/// the inputs to one design-matrix row.
struct Observation
{
  Vec3 accel;
  Vec3 gyro;
};

struct LeastSquaresSolution
{
  Vec3 beta_hat; // true scale divided by the dot constant, 1/(deg/s)
  double condition_number = 0.0;
  double residual_norm = 0.0;   // |X beta_hat - 1|
  double normal_residual = 0.0; // |X^T (X beta_hat - 1)| / |X^T 1|
};

struct ScaleEstimate
{
  Vec3 beta_hat;
  double dot_constant = 0.0; // L, deg/s
  GyroParams params;         // scale K = beta_hat * L, bias in calibrated convention
  Vec3 zero_rate_offset;     // raw output at rest

  double residual_norm = 0.0;
  double normal_residual = 0.0;
  double condition_number = 0.0;
  std::vector<double> dot_uncalibrated; // A . G^m per row
  std::vector<double> dot_calibrated;   // A . (K G^m + b) per row
  std::vector<std::string> warnings;
};

/// Componentwise arithmetic mean; throws InvalidArgument on empty input.
Vec3 ComponentMean(std::span<const Vec3> values);

/// Componentwise mean of raw gyro samples taken at rest. This is the raw
/// zero-rate offset, i.e. -bias / scale in the calibrated convention.
Vec3 EstimateGyroBias(std::span<const Vec3> staticSamples);

/// Row i = accel_i * (gyro_i - offset), componentwise.
Eigen::MatrixX3d BuildDesignMatrix(std::span<const Observation> rows, const Vec3& zeroRateOffset);

/// Least-squares solution of X beta = 1 via column-pivoted QR. Throws
/// DegenerateGeometry when X has fewer than three rows or its condition
/// number exceeds maxCondition.
LeastSquaresSolution SolveBetaHat(const Eigen::MatrixX3d& design, double maxCondition = 1e8);

/// Converts beta_hat into the dot constant L using the known rotor speed.
/// Each row gives |L| = rotorSpeed / |(gyro - offset) * beta_hat|; the mean is
/// returned, signed so that the majority of scale factors come out positive.
double RecoverDotConstant(const Vec3& betaHat,
                          std::span<const Observation> rows,
                          const Vec3& zeroRateOffset,
                          double rotorSpeed);

/// Accel means of every static pose in the session, rotation-paired or not.
std::vector<Vec3> StaticAccelMeans(const CalibrationSession& session);

/// Applies the accelerometer calibration, divides by gravity and pairs the
/// result with gyro data according to the row mode.
std::vector<Observation> PrepareObservations(const CalibrationSession& session,
                                             const AccelParams& accel,
                                             RowMode rows);

/// Full pipeline: offset, normalized design matrix, beta_hat, L, K and bias.
ScaleEstimate CalibrateGyroscope(const CalibrationSession& session,
                                 const AccelParams& accel,
                                 const CalibrationOptions& options = {});

/// Fits accelerometer scale and bias so that every calibrated static mean lies
/// on the sphere of radius gravity. Levenberg-Marquardt from identity; needs at
/// least six poses whose directions span 3D.
AccelParams FitAccelParams(std::span<const Vec3> staticMeans, double gravity);

} // namespace gyrocal
