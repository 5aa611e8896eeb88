/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/simulation.h"

#include "gyrocal/stats.h"
#include "test_support.h"

#include <numbers>

namespace gyrocal
{
namespace
{

SimConfig Noiseless()
{
  SimConfig c;
  c.accel_noise_sigma = 0.0;
  c.rotor_noise_fraction = 0.0;
  c.gyro_noise_sigma = {0, 0, 0};
  c.static_gyro_samples = 200;
  return c;
}

TEST(RandomPose, DeterministicAndAxisPreserving)
{
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i)
  {
    const Quaternion qa = RandomPose(a, {0, 0, 1});
    const Quaternion qb = RandomPose(b, {0, 0, 1});
    EXPECT_EQ(qa.w, qb.w);
    EXPECT_EQ(qa.z, qb.z);
    EXPECT_EQ(RotateVector(qa, {0, 0, 1}), (Vec3{0, 0, 1}));
  }
}

TEST(RandomPose, UniformAboutAxis)
{
  // Axis perpendicular to gravity: the rotated gravity z-component is cos(theta).
  Rng rng(77);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i)
    sum += RotateVector(RandomPose(rng, {1, 0, 0}), {0, 0, 1}).z;
  EXPECT_NEAR(sum / 10000, 0.0, 0.05);
}

TEST(AddCentrifugal, Examples)
{
  const Vec3 a{0.1, 0.2, 9.8};
  EXPECT_EQ(AddCentrifugal(a, {0, 0, 30}, {0, 0, 0.5}), a);

  const Vec3 f = AddCentrifugal({0, 0, 0}, {0, 0, 90}, {1, 0, 0});
  const double w = std::numbers::pi / 2;
  EXPECT_NEAR(f.x, -w * w, 1e-12);
  EXPECT_NEAR(f.y, 0.0, 1e-15);
  EXPECT_NEAR(f.z, 0.0, 1e-15);
  EXPECT_NEAR(Norm(f), 2.4674011002723395, 1e-12);
}

TEST(AddCentrifugal, OrthogonalToRate)
{
  Rng rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i)
  {
    const Vec3 w{50 * u(rng), 50 * u(rng), 50 * u(rng)};
    const Vec3 r{0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng)};
    const Vec3 a{u(rng), u(rng), u(rng)};
    EXPECT_NEAR(Dot(w, AddCentrifugal(a, w, r) - a), 0.0, 1e-12);
  }
}

TEST(GenerateSession, SameSeedSameSession)
{
  SimConfig c;
  c.static_gyro_samples = 100;
  c.raw_rotating_samples = 5;
  const SyntheticSession a = GenerateSession(c);
  const SyntheticSession b = GenerateSession(c);
  EXPECT_EQ(a.session, b.session);
  c.seed = 43;
  EXPECT_NE(GenerateSession(c).session, a.session);
}

TEST(GenerateSession, NoiselessMatchesForwardModel)
{
  SimConfig c = Noiseless();
  c.accel_errors = true;
  const SyntheticSession s = GenerateSession(c);
  const SessionTruth& t = s.truth;
  EXPECT_NEAR(t.dot_constant, Dot(t.gravity_direction, t.rotation_axis) * c.rotor_speed, 1e-15);
  ASSERT_EQ(s.session.poses.size(), 8u);
  const Vec3 rate = t.rotation_axis * c.rotor_speed;
  for (std::size_t i = 0; i < s.session.poses.size(); ++i)
  {
    const PoseObservation& p = s.session.poses[i];
    const Vec3 g = test::RotateAbout(t.rotation_axis, t.pose_angles_deg[i], t.gravity_direction) * c.gravity;
    const Vec3 cal = ApplyAccelCalibration(t.accel, p.accel_mean);
    const Vec3 gyro = ApplyGyroCalibration(t.gyro, p.gyro_mean);
    for (int a = 0; a < 3; ++a)
    {
      EXPECT_NEAR(cal[a], g[a], 1e-12);
      EXPECT_NEAR(gyro[a], rate[a], 1e-12);
    }
  }
  for (const Vec3& v : s.session.static_gyro)
    EXPECT_NEAR(Norm(ApplyGyroCalibration(t.gyro, v)), 0.0, 1e-12);
}

TEST(GenerateSession, NoiselessCalibrationRecoversTruth)
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
  {
    SimConfig c = Noiseless();
    c.seed = seed;
    const SyntheticSession s = GenerateSession(c);
    const ScaleEstimate e = CalibrateGyroscope(s.session, AccelParams::Identity());
    for (int a = 0; a < 3; ++a)
    {
      EXPECT_NEAR(e.params.scale[a], s.truth.gyro.scale[a], 1e-9);
      EXPECT_NEAR(e.params.bias[a], s.truth.gyro.bias[a], 1e-9);
    }
    EXPECT_NEAR(e.dot_constant, s.truth.dot_constant, 1e-9);
  }
}

TEST(GenerateSession, NoiseLevelsShareRandomStreams)
{
  SimConfig quiet;
  quiet.static_gyro_samples = 50;
  SimConfig loud = quiet;
  loud.gyro_noise_sigma = {10, 10, 10};
  loud.accel_noise_sigma = 0.5;
  const SyntheticSession a = GenerateSession(quiet);
  const SyntheticSession b = GenerateSession(loud);
  EXPECT_EQ(a.truth.gyro, b.truth.gyro);
  EXPECT_EQ(a.truth.rotation_axis, b.truth.rotation_axis);
  EXPECT_EQ(a.truth.pose_angles_deg, b.truth.pose_angles_deg);
}

TEST(GenerateSession, InstallationBounds)
{
  for (std::uint64_t seed = 0; seed < 200; ++seed)
  {
    Rng rng(seed);
    Vec3 axis, gravity;
    DrawInstallation(rng, axis, gravity);
    EXPECT_NEAR(Norm(axis), 1.0, 1e-12);
    for (int a = 0; a < 3; ++a)
      EXPECT_GE(std::abs(axis[a]), 0.25);
    const double c = std::abs(Dot(axis, gravity));
    EXPECT_GE(c, 0.3);
    EXPECT_LE(c, 0.9);
  }
}

TEST(GenerateSession, CentrifugalInvariance)
{
  SimConfig c = Noiseless();
  c.centrifugal = true;
  c.lever_arm = {0.1, 0.0, 0.0};
  c.raw_rotating_samples = 36;
  c.rotor_speed = 30.0;
  const SyntheticSession s = GenerateSession(c);

  const ScaleEstimate perPose = CalibrateGyroscope(s.session, AccelParams::Identity());
  const ScaleEstimate perSample =
      CalibrateGyroscope(s.session, AccelParams::Identity(), {.rows = RowMode::PerSample});
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(perSample.params.scale[a], perPose.params.scale[a], 1e-9);

  std::vector<double> rotating, still;
  for (const PoseObservation& p : s.session.poses)
    for (const RotatingSample& r : p.rotating_samples)
    {
      const Vec3 g = ApplyGyroCalibration(perPose.params, r.gyro);
      rotating.push_back(Dot(r.accel / c.gravity, g));
      still.push_back(Dot(p.accel_mean / c.gravity, g));
    }
  const DistributionComparison cmp =
      CompareDistributions({rotating, SeriesLabel::Rotating}, {still, SeriesLabel::Static});
  EXPECT_LT(cmp.mean_diff, 1e-9);
}

TEST(SimConfigValidate, Rejections)
{
  SimConfig c;
  c.pose_count = 2;
  EXPECT_NE(test::ThrownMessage([&] { Validate(c); }).find("pose_count"), std::string::npos);
  c = SimConfig{};
  c.gyro_scale_range = {1.1, 0.9};
  EXPECT_EQ(test::ThrownKind([&] { Validate(c); }), ErrorKind::Config);
  c = SimConfig{};
  c.accel_noise_sigma = -1;
  EXPECT_EQ(test::ThrownKind([&] { Validate(c); }), ErrorKind::Config);
  c = SimConfig{};
  c.pose_angles_deg = {0, 90};
  EXPECT_EQ(test::ThrownKind([&] { Validate(c); }), ErrorKind::Config);
}

TEST(DeriveSeed, DistinctAndStable)
{
  EXPECT_EQ(DeriveSeed(42, 7), DeriveSeed(42, 7));
  EXPECT_NE(DeriveSeed(42, 7), DeriveSeed(42, 8));
  EXPECT_NE(DeriveSeed(42, 0), DeriveSeed(43, 0));
}

} // namespace
} // namespace gyrocal
