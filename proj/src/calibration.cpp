/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/calibration.h"

#include "gyrocal/error.h"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace gyrocal
{
namespace
{
constexpr std::size_t kMinPoses = 4;

// Rows whose rotation projection falls below this cannot fix L.
constexpr double kMinObservableRate = 1e-12;

// Plausible band for |A| after gravity normalization. Outside it the pose was
// captured in free fall or while being moved.
constexpr double kMinNormalizedAccel = 0.5;
constexpr double kMaxNormalizedAccel = 1.5;

const char* kDegenerateMessage = "degenerate pose geometry: add poses with distinct orientations";

Vec3 NormalizedAccel(const AccelParams& accel, const Vec3& raw, double gravity, int poseId)
{
  const Vec3 a = ApplyAccelCalibration(accel, raw) / gravity;
  const double magnitude = Norm(a);
  if (!(magnitude > kMinNormalizedAccel && magnitude < kMaxNormalizedAccel))
  {
    throw Error(ErrorKind::InvalidArgument,
                "implausible accelerometer magnitude at pose " + std::to_string(poseId) +
                    " (|A|/g = " + std::to_string(magnitude) + ")");
  }
  return a;
}
} // namespace

Vec3 ComponentMean(std::span<const Vec3> values)
{
  if (values.empty())
    throw Error(ErrorKind::InvalidArgument, "mean of empty set");

  Vec3 sum;
  for (const Vec3& v : values)
    sum += v;
  return sum / static_cast<double>(values.size());
}

Vec3 EstimateGyroBias(std::span<const Vec3> staticSamples)
{
  if (staticSamples.empty())
    throw Error(ErrorKind::InvalidArgument, "no static data");
  return ComponentMean(staticSamples);
}

Eigen::MatrixX3d BuildDesignMatrix(std::span<const Observation> rows, const Vec3& zeroRateOffset)
{
  Eigen::MatrixX3d design(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    const Vec3 row = Hadamard(rows[i].accel, rows[i].gyro - zeroRateOffset);
    const auto r = static_cast<Eigen::Index>(i);
    design(r, 0) = row.x;
    design(r, 1) = row.y;
    design(r, 2) = row.z;
  }
  return design;
}

LeastSquaresSolution SolveBetaHat(const Eigen::MatrixX3d& design, double maxCondition)
{
  if (design.rows() < 3 || !design.allFinite())
    throw Error(ErrorKind::DegenerateGeometry, kDegenerateMessage);

  const Eigen::JacobiSVD<Eigen::MatrixX3d> svd(design);
  const Eigen::Vector3d sv = svd.singularValues();
  const double condition =
      sv(2) > 0.0 ? sv(0) / sv(2) : std::numeric_limits<double>::infinity();
  if (!(condition <= maxCondition))
    throw Error(ErrorKind::DegenerateGeometry, kDegenerateMessage);

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(design.rows());
  const Eigen::Vector3d beta = design.colPivHouseholderQr().solve(ones);

  const Eigen::VectorXd residual = design * beta - ones;
  const Eigen::Vector3d rhs = design.transpose() * ones;

  LeastSquaresSolution solution;
  solution.beta_hat = {beta(0), beta(1), beta(2)};
  solution.condition_number = condition;
  solution.residual_norm = residual.norm();
  solution.normal_residual = (design.transpose() * residual).norm() / rhs.norm();
  return solution;
}

double RecoverDotConstant(const Vec3& betaHat,
                          std::span<const Observation> rows,
                          const Vec3& zeroRateOffset,
                          double rotorSpeed)
{
  if (!(rotorSpeed > 0.0))
    throw Error(ErrorKind::InvalidArgument, "rotor speed must be positive");
  if (betaHat == Vec3{})
    throw Error(ErrorKind::InvalidArgument, "beta_hat is zero");
  if (rows.empty())
    throw Error(ErrorKind::InvalidArgument, "no observations");

  double sum = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    const double projected = Norm(Hadamard(rows[i].gyro - zeroRateOffset, betaHat));
    if (projected < kMinObservableRate)
      throw Error(ErrorKind::NotObservable, "rotation not observable at pose " + std::to_string(i));
    sum += rotorSpeed / projected;
  }
  const double magnitude = sum / static_cast<double>(rows.size());

  int positive = 0;
  for (int axis = 0; axis < 3; ++axis)
    positive += betaHat[axis] > 0.0 ? 1 : 0;
  return positive >= 2 ? magnitude : -magnitude;
}

std::vector<Vec3> StaticAccelMeans(const CalibrationSession& session)
{
  std::vector<Vec3> means;
  means.reserve(session.poses.size() + session.accel_only_poses.size());
  for (const PoseObservation& pose : session.poses)
    means.push_back(pose.accel_mean);
  for (const StaticAccelObservation& pose : session.accel_only_poses)
    means.push_back(pose.accel_mean);
  return means;
}

std::vector<Observation> PrepareObservations(const CalibrationSession& session,
                                             const AccelParams& accel,
                                             RowMode rows)
{
  if (!(session.gravity > 0.0))
    throw Error(ErrorKind::InvalidArgument, "gravity magnitude must be positive");

  std::vector<Observation> observations;
  if (rows == RowMode::PerPose)
  {
    observations.reserve(session.poses.size());
    for (const PoseObservation& pose : session.poses)
    {
      observations.push_back(
          {NormalizedAccel(accel, pose.accel_mean, session.gravity, pose.pose_id), pose.gyro_mean});
    }
    return observations;
  }

  for (const PoseObservation& pose : session.poses)
  {
    for (const RotatingSample& sample : pose.rotating_samples)
    {
      observations.push_back(
          {NormalizedAccel(accel, sample.accel, session.gravity, pose.pose_id), sample.gyro});
    }
  }
  if (observations.empty())
    throw Error(ErrorKind::InvalidArgument, "per-sample rows requested but session has no rotating samples");
  return observations;
}

ScaleEstimate CalibrateGyroscope(const CalibrationSession& session,
                                 const AccelParams& accel,
                                 const CalibrationOptions& options)
{
  Validate(accel);
  if (!(session.rotor_speed > 0.0))
    throw Error(ErrorKind::InvalidArgument, "rotor speed must be positive");
  if (session.poses.size() < kMinPoses)
    throw Error(ErrorKind::DegenerateGeometry, kDegenerateMessage);

  ScaleEstimate estimate;
  if (options.zero_rate_offset)
  {
    estimate.zero_rate_offset = *options.zero_rate_offset;
  }
  else
  {
    estimate.zero_rate_offset = EstimateGyroBias(session.static_gyro);
    if (session.static_gyro.size() < options.static_sample_warning)
    {
      estimate.warnings.push_back("only " + std::to_string(session.static_gyro.size()) +
                                  " static gyro samples; bias estimate may be noisy");
    }
  }

  const std::vector<Observation> rows = PrepareObservations(session, accel, options.rows);
  const Eigen::MatrixX3d design = BuildDesignMatrix(rows, estimate.zero_rate_offset);
  const LeastSquaresSolution solution = SolveBetaHat(design, options.max_condition);

  estimate.beta_hat = solution.beta_hat;
  estimate.condition_number = solution.condition_number;
  estimate.residual_norm = solution.residual_norm;
  estimate.normal_residual = solution.normal_residual;
  estimate.dot_constant =
      RecoverDotConstant(solution.beta_hat, rows, estimate.zero_rate_offset, session.rotor_speed);

  estimate.params.scale = solution.beta_hat * estimate.dot_constant;
  for (int axis = 0; axis < 3; ++axis)
  {
    if (!(estimate.params.scale[axis] > 0.0))
    {
      throw Error(ErrorKind::SignResolution,
                  "sign resolution failed - check rotation direction vs gravity");
    }
  }
  estimate.params.bias = BiasFromOffset(estimate.params.scale, estimate.zero_rate_offset);

  estimate.dot_uncalibrated.reserve(rows.size());
  estimate.dot_calibrated.reserve(rows.size());
  for (const Observation& row : rows)
  {
    estimate.dot_uncalibrated.push_back(Dot(row.accel, row.gyro));
    estimate.dot_calibrated.push_back(Dot(row.accel, ApplyGyroCalibration(estimate.params, row.gyro)));
  }
  return estimate;
}

} // namespace gyrocal
