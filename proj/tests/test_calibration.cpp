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

using test::MakeSession;
using test::ThrownKind;
using test::Truth;

const std::vector<double> kFourAngles{0, 90, 180, 270};
const std::vector<double> kEightAngles{0, 45, 90, 135, 180, 225, 270, 315};

// Axis at 60 degrees from gravity, rate 20 deg/s: true L = 10.
Truth ReferenceTruth()
{
  Truth t;
  t.scale = {1.1, 0.9, 1.2};
  t.bias = {0.5, -0.4, 1.0};
  t.axis = test::UnitVec(1, 1, 1);
  const Vec3 perp = test::UnitVec(1, -1, 0);
  const double c = 0.5, s = std::sqrt(0.75);
  t.gravity = {c * t.axis.x + s * perp.x, c * t.axis.y + s * perp.y, c * t.axis.z + s * perp.z};
  t.rate = 20.0;
  t.dotConstant = 10.0;
  return t;
}

TEST(EstimateGyroBias, Examples)
{
  const std::vector<Vec3> one{{1, 2, 3}};
  EXPECT_EQ(EstimateGyroBias(one), (Vec3{1, 2, 3}));
  const std::vector<Vec3> sym{{1, 0, 0}, {-1, 0, 0}};
  EXPECT_EQ(EstimateGyroBias(sym), (Vec3{0, 0, 0}));
  EXPECT_EQ(test::ThrownMessage([] { EstimateGyroBias({}); }), "no static data");
}

TEST(EstimateGyroBias, MatchesSampleMean)
{
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 0.1);
  std::vector<Vec3> samples;
  double sx = 0, sy = 0, sz = 0;
  for (int i = 0; i < 10000; ++i)
  {
    samples.push_back({0.5 + n(rng), -0.3 + n(rng), 0.2 + n(rng)});
    sx += samples.back().x;
    sy += samples.back().y;
    sz += samples.back().z;
  }
  const Vec3 b = EstimateGyroBias(samples);
  EXPECT_NEAR(b.x, sx / 10000, 1e-12);
  EXPECT_NEAR(b.y, sy / 10000, 1e-12);
  EXPECT_NEAR(b.z, sz / 10000, 1e-12);
  EXPECT_NEAR(b.x, 0.5, 0.01);
  EXPECT_NEAR(b.y, -0.3, 0.01);
  EXPECT_NEAR(b.z, 0.2, 0.01);
}

TEST(BuildDesignMatrix, Rows)
{
  const std::vector<Observation> a{{{0, 0, 1}, {2, 3, 4}}};
  const Eigen::MatrixX3d xa = BuildDesignMatrix(a, {0, 0, 0});
  EXPECT_EQ(xa.row(0), Eigen::RowVector3d(0, 0, 4));

  const std::vector<Observation> b{{{1, 0, 0}, {5, 9, 9}}};
  EXPECT_EQ(BuildDesignMatrix(b, {0, 0, 0}).row(0), Eigen::RowVector3d(5, 0, 0));

  const std::vector<Observation> c{{{0.6, 0, 0.8}, {10, 0, 10}}};
  const Eigen::MatrixX3d xc = BuildDesignMatrix(c, {1, 0, 1});
  EXPECT_NEAR(xc(0, 0), 5.4, 1e-15);
  EXPECT_EQ(xc(0, 1), 0.0);
  EXPECT_NEAR(xc(0, 2), 7.2, 1e-15);
}

TEST(SolveBetaHat, IdentityRows)
{
  const LeastSquaresSolution s = SolveBetaHat(Eigen::Matrix3d::Identity());
  EXPECT_NEAR(s.beta_hat.x, 1.0, 1e-15);
  EXPECT_NEAR(s.beta_hat.y, 1.0, 1e-15);
  EXPECT_NEAR(s.beta_hat.z, 1.0, 1e-15);
  EXPECT_NEAR(s.condition_number, 1.0, 1e-12);
}

TEST(SolveBetaHat, RankDeficientIsDegenerate)
{
  const Eigen::MatrixX3d x = Eigen::MatrixX3d::Ones(3, 3);
  const std::string message = test::ThrownMessage([&] { SolveBetaHat(x); });
  EXPECT_EQ(message, "degenerate pose geometry: add poses with distinct orientations");
  EXPECT_EQ(ThrownKind([&] { SolveBetaHat(x); }), ErrorKind::DegenerateGeometry);
  EXPECT_EQ(ThrownKind([] { SolveBetaHat(Eigen::MatrixX3d::Identity(2, 3)); }), ErrorKind::DegenerateGeometry);
}

TEST(SolveBetaHat, ForwardModelBetaHat)
{
  const Truth t = ReferenceTruth();
  const CalibrationSession s = MakeSession(t, kFourAngles);
  const std::vector<Observation> rows = PrepareObservations(s, AccelParams::Identity(), RowMode::PerPose);
  const Vec3 offset = EstimateGyroBias(s.static_gyro);
  const Eigen::MatrixX3d x = BuildDesignMatrix(rows, offset);
  const LeastSquaresSolution sol = SolveBetaHat(x);
  EXPECT_NEAR(sol.beta_hat.x, 0.11, 1e-9);
  EXPECT_NEAR(sol.beta_hat.y, 0.09, 1e-9);
  EXPECT_NEAR(sol.beta_hat.z, 0.12, 1e-9);
  const Eigen::Vector3d beta(sol.beta_hat.x, sol.beta_hat.y, sol.beta_hat.z);
  EXPECT_LT((x * beta - Eigen::VectorXd::Ones(4)).norm(), 1e-9);
  EXPECT_LT(sol.normal_residual, 1e-9);
}

TEST(RecoverDotConstant, Examples)
{
  const std::vector<Observation> one{{{1, 0, 0}, {10, 0, 0}}};
  EXPECT_NEAR(RecoverDotConstant({0.1, 0.1, 0.1}, one, {0, 0, 0}, 10.0), 10.0, 1e-12);

  const std::vector<Observation> still{{{1, 0, 0}, {0, 0, 0}}};
  EXPECT_EQ(test::ThrownMessage([&] { RecoverDotConstant({0.1, 0.1, 0.1}, still, {0, 0, 0}, 10.0); }),
            "rotation not observable at pose 0");
  EXPECT_EQ(ThrownKind([&] { RecoverDotConstant({0.1, 0.1, 0.1}, still, {0, 0, 0}, 10.0); }),
            ErrorKind::NotObservable);
  EXPECT_EQ(ThrownKind([&] { RecoverDotConstant({0, 0, 0}, one, {0, 0, 0}, 10.0); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(ThrownKind([&] { RecoverDotConstant({0.1, 0.1, 0.1}, one, {0, 0, 0}, 0.0); }),
            ErrorKind::InvalidArgument);
}

TEST(RecoverDotConstant, ForwardModel)
{
  const Truth t = ReferenceTruth();
  const CalibrationSession s = MakeSession(t, kEightAngles);
  const std::vector<Observation> rows = PrepareObservations(s, AccelParams::Identity(), RowMode::PerPose);
  const Vec3 offset = EstimateGyroBias(s.static_gyro);
  const double l = RecoverDotConstant({0.11, 0.09, 0.12}, rows, offset, t.rate);
  EXPECT_NEAR(l, 10.0, 1e-9);
}

TEST(CalibrateGyroscope, NoiselessRecoversTruth)
{
  const Truth t = ReferenceTruth();
  const ScaleEstimate e = CalibrateGyroscope(MakeSession(t, kFourAngles), AccelParams::Identity());
  for (int a = 0; a < 3; ++a)
  {
    EXPECT_NEAR(e.params.scale[a], t.scale[a], 1e-9);
    EXPECT_NEAR(e.params.bias[a], t.bias[a], 1e-9);
    EXPECT_EQ(e.params.scale[a], e.beta_hat[a] * e.dot_constant);
  }
  EXPECT_NEAR(e.dot_constant, 10.0, 1e-9);
  EXPECT_LT(e.normal_residual, 1e-9);
  ASSERT_EQ(e.dot_calibrated.size(), 4u);
  for (double d : e.dot_calibrated)
    EXPECT_NEAR(d, 10.0, 1e-9);
}

TEST(CalibrateGyroscope, IdentitySensor)
{
  Truth t = ReferenceTruth();
  t.scale = {1, 1, 1};
  t.bias = {0, 0, 0};
  const ScaleEstimate e = CalibrateGyroscope(MakeSession(t, {10, 100, 200, 300, 333}), AccelParams::Identity());
  for (int a = 0; a < 3; ++a)
  {
    EXPECT_NEAR(e.params.scale[a], 1.0, 1e-9);
    EXPECT_NEAR(e.params.bias[a], 0.0, 1e-9);
  }
}

TEST(CalibrateGyroscope, RandomizedOracle)
{
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> poseCount(4, 12);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  for (int trial = 0; trial < 200; ++trial)
  {
    const Truth t = test::RandomTruth(rng);
    std::vector<double> angles(static_cast<std::size_t>(poseCount(rng)));
    for (double& a : angles)
      a = angle(rng);
    const ScaleEstimate e = CalibrateGyroscope(MakeSession(t, angles), AccelParams::Identity(),
                                               {.max_condition = 1e12});
    for (int a = 0; a < 3; ++a)
    {
      EXPECT_NEAR(e.params.scale[a], t.scale[a], 1e-9 * t.scale[a]);
      EXPECT_NEAR(e.params.bias[a], t.bias[a], 1e-9 * std::max(1.0, std::abs(t.bias[a])));
    }
    EXPECT_NEAR(e.dot_constant, t.dotConstant, 1e-9 * std::abs(t.dotConstant));
  }
}

TEST(CalibrateGyroscope, RateLinearity)
{
  Truth t = ReferenceTruth();
  const ScaleEstimate slow = CalibrateGyroscope(MakeSession(t, kFourAngles), AccelParams::Identity());
  t.rate *= 2.0;
  const ScaleEstimate fast = CalibrateGyroscope(MakeSession(t, kFourAngles), AccelParams::Identity());
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(slow.params.scale[a], fast.params.scale[a], 1e-9);
  EXPECT_NEAR(fast.dot_constant, 2.0 * slow.dot_constant, 1e-9);
}

TEST(CalibrateGyroscope, CalibratedDotsTighterThanRaw)
{
  const Truth t = ReferenceTruth();
  const ScaleEstimate e = CalibrateGyroscope(MakeSession(t, kEightAngles), AccelParams::Identity());
  auto variance = [](const std::vector<double>& v) {
    double m = 0, s = 0;
    for (double x : v)
      m += x;
    m /= static_cast<double>(v.size());
    for (double x : v)
      s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
  };
  EXPECT_GT(variance(e.dot_uncalibrated), 0.0);
  EXPECT_LT(variance(e.dot_calibrated), variance(e.dot_uncalibrated));
}

TEST(CalibrateGyroscope, TooFewPosesIsDegenerate)
{
  const Truth t = ReferenceTruth();
  EXPECT_EQ(ThrownKind([&] { CalibrateGyroscope(MakeSession(t, {0, 0, 0}), AccelParams::Identity()); }),
            ErrorKind::DegenerateGeometry);
  EXPECT_EQ(ThrownKind([&] { CalibrateGyroscope(MakeSession(t, {30, 30, 30, 30}), AccelParams::Identity()); }),
            ErrorKind::DegenerateGeometry);
}

TEST(CalibrateGyroscope, MixedSignsFailSignResolution)
{
  // Gyro X axis mounted inverted: its fitted scale comes out negative.
  Truth t = ReferenceTruth();
  CalibrationSession s = MakeSession(t, kEightAngles);
  for (PoseObservation& p : s.poses)
    p.gyro_mean.x = -p.gyro_mean.x;
  for (Vec3& v : s.static_gyro)
    v.x = -v.x;
  EXPECT_EQ(ThrownKind([&] { CalibrateGyroscope(s, AccelParams::Identity()); }), ErrorKind::SignResolution);
}

TEST(CalibrateGyroscope, ReversedRotationStillPositive)
{
  // Spinning the other way flips the sign of L, not of K.
  Truth t = ReferenceTruth();
  t.axis = {-t.axis.x, -t.axis.y, -t.axis.z};
  const ScaleEstimate e = CalibrateGyroscope(MakeSession(t, kEightAngles), AccelParams::Identity());
  EXPECT_NEAR(e.dot_constant, -10.0, 1e-9);
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(e.params.scale[a], t.scale[a], 1e-9);
}

TEST(CalibrateGyroscope, KnownOffsetAndStaticWarning)
{
  const Truth t = ReferenceTruth();
  CalibrationSession s = MakeSession(t, kFourAngles);
  s.static_gyro.resize(5);
  const ScaleEstimate warned = CalibrateGyroscope(s, AccelParams::Identity());
  EXPECT_EQ(warned.warnings.size(), 1u);

  s.static_gyro.clear();
  EXPECT_EQ(ThrownKind([&] { CalibrateGyroscope(s, AccelParams::Identity()); }), ErrorKind::InvalidArgument);
  CalibrationOptions options;
  options.zero_rate_offset = ZeroRateOffset(GyroParams{t.scale, t.bias});
  const ScaleEstimate e = CalibrateGyroscope(s, AccelParams::Identity(), options);
  EXPECT_NEAR(e.params.bias.x, t.bias.x, 1e-9);
}

TEST(CalibrateGyroscope, ImplausibleAccelRejected)
{
  const Truth t = ReferenceTruth();
  CalibrationSession s = MakeSession(t, kFourAngles);
  s.poses[2].accel_mean = {0.1, 0.1, 0.1};
  const std::string message = test::ThrownMessage([&] { CalibrateGyroscope(s, AccelParams::Identity()); });
  EXPECT_NE(message.find("implausible accelerometer magnitude at pose 3"), std::string::npos) << message;
}

TEST(CalibrateGyroscope, PerSampleRowsMatchPerPoseWhenNoiseless)
{
  const Truth t = ReferenceTruth();
  CalibrationSession s = MakeSession(t, kFourAngles);
  EXPECT_EQ(ThrownKind([&] { CalibrateGyroscope(s, AccelParams::Identity(), {.rows = RowMode::PerSample}); }),
            ErrorKind::InvalidArgument);
  for (PoseObservation& p : s.poses)
    for (int k = 0; k < 3; ++k)
      p.rotating_samples.push_back({0.1 * k, p.gyro_mean, p.accel_mean});
  const ScaleEstimate e = CalibrateGyroscope(s, AccelParams::Identity(), {.rows = RowMode::PerSample});
  EXPECT_EQ(e.dot_calibrated.size(), 12u);
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(e.params.scale[a], t.scale[a], 1e-9);
}

} // namespace
} // namespace gyrocal
