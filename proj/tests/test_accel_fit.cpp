/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/calibration.h"

#include "test_support.h"

#include <random>

namespace gyrocal
{
namespace
{

constexpr double kG = 9.80665;

TEST(FitAccelParams, AxisAlignedPosesAreIdentity)
{
  const std::vector<Vec3> poses{{kG, 0, 0}, {-kG, 0, 0}, {0, kG, 0}, {0, -kG, 0}, {0, 0, kG}, {0, 0, -kG}};
  const AccelParams p = FitAccelParams(poses, kG);
  for (int a = 0; a < 3; ++a)
  {
    EXPECT_NEAR(p.scale[a], 1.0, 1e-9);
    EXPECT_NEAR(p.bias[a], 0.0, 1e-9);
  }
}

TEST(FitAccelParams, RecoversDistortionInverse)
{
  // Sensor reads raw = s * true + d; the calibration must be 1/s and -d/s.
  const Vec3 s{1.05, 0.95, 1.02};
  const Vec3 d{0.003, -0.002, 0.004};
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Vec3> poses;
  for (int i = 0; i < 12; ++i)
  {
    const Vec3 dir = test::UnitVec(n(rng), n(rng), n(rng));
    poses.push_back({s.x * kG * dir.x + d.x, s.y * kG * dir.y + d.y, s.z * kG * dir.z + d.z});
  }
  const AccelParams p = FitAccelParams(poses, kG);
  for (int a = 0; a < 3; ++a)
  {
    EXPECT_NEAR(p.scale[a], 1.0 / s[a], 1e-6);
    EXPECT_NEAR(p.bias[a], -d[a] / s[a], 1e-6);
  }
}

TEST(FitAccelParams, DegenerateGeometry)
{
  const std::vector<Vec3> coplanar{{kG, 0, 0}, {0, kG, 0}, {-kG, 0, 0}};
  EXPECT_EQ(test::ThrownKind([&] { FitAccelParams(coplanar, kG); }), ErrorKind::DegenerateGeometry);

  std::vector<Vec3> flat;
  for (int i = 0; i < 8; ++i)
  {
    const double t = i * 0.785;
    flat.push_back({kG * std::cos(t), kG * std::sin(t), 0.0});
  }
  EXPECT_EQ(test::ThrownKind([&] { FitAccelParams(flat, kG); }), ErrorKind::DegenerateGeometry);

  // A circle off the equator is not coplanar through the origin but still
  // cannot separate scale from bias.
  std::vector<Vec3> cone;
  for (int i = 0; i < 8; ++i)
  {
    const double t = i * 0.785;
    cone.push_back({0.8 * kG * std::cos(t), 0.8 * kG * std::sin(t), 0.6 * kG});
  }
  EXPECT_EQ(test::ThrownKind([&] { FitAccelParams(cone, kG); }), ErrorKind::DegenerateGeometry);
}

} // namespace
} // namespace gyrocal
