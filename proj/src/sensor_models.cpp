/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/sensor_models.h"

#include "gyrocal/error.h"

#include <cmath>

namespace gyrocal
{
namespace
{
void ValidateScale(const Vec3& scale, const char* what)
{
  for (int axis = 0; axis < 3; ++axis)
  {
    if (!std::isfinite(scale[axis]) || scale[axis] <= 0.0)
      throw Error(ErrorKind::InvalidArgument,
                  std::string(what) + " scale components must be finite and positive");
  }
}
} // namespace

void Validate(const GyroParams& params)
{
  ValidateScale(params.scale, "gyro");
  if (!IsFinite(params.bias))
    throw Error(ErrorKind::InvalidArgument, "gyro bias must be finite");
}

void Validate(const AccelParams& params)
{
  ValidateScale(params.scale, "accel");
  if (!IsFinite(params.bias))
    throw Error(ErrorKind::InvalidArgument, "accel bias must be finite");
}

Vec3 ApplyGyroCalibration(const GyroParams& params, const Vec3& raw)
{
  return Hadamard(params.scale, raw) + params.bias;
}

Vec3 DistortGyro(const GyroParams& params, const Vec3& trueRate)
{
  if (params.scale.x == 0.0 || params.scale.y == 0.0 || params.scale.z == 0.0)
    throw Error(ErrorKind::InvalidArgument, "gyro scale component is zero");
  return Divide(trueRate - params.bias, params.scale);
}

Vec3 ApplyAccelCalibration(const AccelParams& params, const Vec3& raw)
{
  return Hadamard(params.scale, raw) + params.bias;
}

Vec3 DistortAccel(const AccelParams& params, const Vec3& trueAccel)
{
  if (params.scale.x == 0.0 || params.scale.y == 0.0 || params.scale.z == 0.0)
    throw Error(ErrorKind::InvalidArgument, "accel scale component is zero");
  return Divide(trueAccel - params.bias, params.scale);
}

Vec3 ZeroRateOffset(const GyroParams& params)
{
  return DistortGyro(params, Vec3{});
}

Vec3 BiasFromOffset(const Vec3& scale, const Vec3& zeroRateOffset)
{
  return -Hadamard(scale, zeroRateOffset);
}

} // namespace gyrocal
