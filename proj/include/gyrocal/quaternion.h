/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/vec3.h"

namespace gyrocal
{

/// Hamilton quaternion, scalar first.
struct Quaternion
{
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion Identity() { return {}; }

  /// Rotation of angleRad about axis (normalized internally).
  static Quaternion FromAxisAngle(const Vec3& axis, double angleRad);

  double Norm() const;
  Quaternion Normalized() const;
  Quaternion Conjugate() const { return {w, -x, -y, -z}; }
  Vec3 VectorPart() const { return {x, y, z}; }
};

Quaternion operator*(const Quaternion& a, const Quaternion& b);

/// Active rotation of v by q. Throws InvalidArgument when |q| differs from 1
/// by more than 1e-6.
Vec3 RotateVector(const Quaternion& q, const Vec3& v);

} // namespace gyrocal
