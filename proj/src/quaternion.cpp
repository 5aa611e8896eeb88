/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/quaternion.h"

#include "gyrocal/error.h"

#include <cmath>

namespace gyrocal
{
namespace
{
constexpr double kUnitTolerance = 1e-6;
}

Quaternion Quaternion::FromAxisAngle(const Vec3& axis, double angleRad)
{
  const double norm = gyrocal::Norm(axis);
  if (!(norm > 0.0))
    throw Error(ErrorKind::InvalidArgument, "rotation axis has zero length");
  const double half = 0.5 * angleRad;
  const Vec3 u = axis * (std::sin(half) / norm);
  return {std::cos(half), u.x, u.y, u.z};
}

double Quaternion::Norm() const
{
  return std::sqrt(w * w + x * x + y * y + z * z);
}

Quaternion Quaternion::Normalized() const
{
  const double n = Norm();
  return {w / n, x / n, y / n, z / n};
}

Quaternion operator*(const Quaternion& a, const Quaternion& b)
{
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Vec3 RotateVector(const Quaternion& q, const Vec3& v)
{
  if (std::abs(q.Norm() - 1.0) > kUnitTolerance)
    throw Error(ErrorKind::InvalidArgument, "quaternion is not unit norm");

  // v' = v + 2w (u x v) + 2 u x (u x v)
  const Vec3 u = q.VectorPart();
  const Vec3 t = Cross(u, v) * 2.0;
  return v + t * q.w + Cross(u, t);
}

} // namespace gyrocal
