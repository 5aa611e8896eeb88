/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/vec3.h"

namespace gyrocal
{

/// Six-parameter gyroscope model: calibrated = scale * raw + bias, with a
/// diagonal scale. Rates are in deg/s.
struct GyroParams
{
  Vec3 scale{1.0, 1.0, 1.0};
  Vec3 bias{0.0, 0.0, 0.0};

  static GyroParams Identity() { return {}; }
  friend bool operator==(const GyroParams&, const GyroParams&) = default;
};

/// Accelerometer pre-calibration with the same diagonal-scale-plus-bias form.
/// Bias is in m/s^2.
struct AccelParams
{
  Vec3 scale{1.0, 1.0, 1.0};
  Vec3 bias{0.0, 0.0, 0.0};

  static AccelParams Identity() { return {}; }
  friend bool operator==(const AccelParams&, const AccelParams&) = default;
};

/// Throws InvalidArgument unless every scale component is finite and positive.
void Validate(const GyroParams& params);
void Validate(const AccelParams& params);

Vec3 ApplyGyroCalibration(const GyroParams& params, const Vec3& raw);

/// Inverse of ApplyGyroCalibration: the raw reading a sensor with these
/// parameters reports for the given true rate. Rejects zero scale.
Vec3 DistortGyro(const GyroParams& params, const Vec3& trueRate);

Vec3 ApplyAccelCalibration(const AccelParams& params, const Vec3& raw);

Vec3 DistortAccel(const AccelParams& params, const Vec3& trueAccel);

/// Raw gyro output at zero true rate, i.e. the offset removed before the
/// design matrix is built. Equals -bias / scale.
Vec3 ZeroRateOffset(const GyroParams& params);

/// Additive bias (calibrated = scale * raw + bias) recovered from a raw zero-rate offset: -scale * offset.
Vec3 BiasFromOffset(const Vec3& scale, const Vec3& zeroRateOffset);

} // namespace gyrocal
