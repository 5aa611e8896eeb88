/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/calibration.h"
#include "gyrocal/error.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace gyrocal
{
namespace
{
constexpr std::size_t kMinAccelPoses = 6;
constexpr int kMaxIterations = 100;
constexpr double kStepTolerance = 1e-10;

// Smallest-to-largest eigenvalue ratio of the direction scatter matrix. Below
// this the pose directions are effectively coplanar.
constexpr double kMinDirectionSpread = 1e-3;

// Largest acceptable condition number of J^T J at the solution. Points that
// all lie on one circle of the sphere land here.
constexpr double kMaxNormalCondition = 1e12;

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

struct Linearization
{
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
};

// Residuals are normalized by g^2 so the cost is dimensionless.
Linearization Linearize(std::span<const Vec3> means, const Vector6d& p, double gravity)
{
  const double g2 = gravity * gravity;
  const auto n = static_cast<Eigen::Index>(means.size());
  Linearization lin{Eigen::VectorXd(n), Eigen::MatrixXd(n, 6)};
  for (Eigen::Index k = 0; k < n; ++k)
  {
    const Vec3& a = means[static_cast<std::size_t>(k)];
    double sq = 0.0;
    for (int j = 0; j < 3; ++j)
    {
      const double c = p(j) * a[j] + p(3 + j);
      sq += c * c;
      lin.jacobian(k, j) = 2.0 * c * a[j] / g2;
      lin.jacobian(k, 3 + j) = 2.0 * c / g2;
    }
    lin.residual(k) = (sq - g2) / g2;
  }
  return lin;
}

double Cost(std::span<const Vec3> means, const Vector6d& p, double gravity)
{
  return Linearize(means, p, gravity).residual.squaredNorm();
}

void CheckDirectionSpread(std::span<const Vec3> means)
{
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const Vec3& m : means)
  {
    const double norm = Norm(m);
    if (!(norm > 0.0))
      throw Error(ErrorKind::DegenerateGeometry, "accelerometer fit: zero static mean");
    const Eigen::Vector3d u(m.x / norm, m.y / norm, m.z / norm);
    scatter += u * u.transpose();
  }
  const Eigen::Vector3d eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(scatter).eigenvalues();
  if (eig(0) < kMinDirectionSpread * eig(2))
    throw Error(ErrorKind::DegenerateGeometry, "accelerometer fit: static poses do not span 3D");
}
} // namespace

AccelParams FitAccelParams(std::span<const Vec3> staticMeans, double gravity)
{
  if (!(gravity > 0.0))
    throw Error(ErrorKind::InvalidArgument, "gravity magnitude must be positive");
  if (staticMeans.size() < kMinAccelPoses)
  {
    throw Error(ErrorKind::DegenerateGeometry,
                "accelerometer fit needs at least " + std::to_string(kMinAccelPoses) +
                    " static poses, got " + std::to_string(staticMeans.size()));
  }
  CheckDirectionSpread(staticMeans);

  Vector6d p;
  p << 1.0, 1.0, 1.0, 0.0, 0.0, 0.0;
  double lambda = 1e-3;
  double cost = Cost(staticMeans, p, gravity);
  bool converged = false;

  for (int iter = 0; iter < kMaxIterations && !converged; ++iter)
  {
    const Linearization lin = Linearize(staticMeans, p, gravity);
    const Matrix6d normal = lin.jacobian.transpose() * lin.jacobian;
    const Vector6d gradient = lin.jacobian.transpose() * lin.residual;

    Matrix6d damped = normal;
    damped.diagonal() += lambda * normal.diagonal();
    const Vector6d step = damped.ldlt().solve(-gradient);
    if (!step.allFinite())
      break;

    // A tiny step under heavy damping says nothing about convergence.
    if (step.norm() < kStepTolerance && lambda < 1e3)
    {
      converged = true;
      break;
    }

    const Vector6d candidate = p + step;
    const double candidateCost = Cost(staticMeans, candidate, gravity);
    if (candidateCost <= cost)
    {
      p = candidate;
      cost = candidateCost;
      lambda = std::max(lambda * 0.1, 1e-12);
    }
    else
    {
      lambda *= 10.0;
    }
  }

  if (!converged)
  {
    throw Error(ErrorKind::NotConverged,
                "accelerometer fit did not converge; last residual " + std::to_string(std::sqrt(cost)));
  }

  const Linearization lin = Linearize(staticMeans, p, gravity);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(lin.jacobian).singularValues();
  const double normalCondition = sv(5) > 0.0 ? (sv(0) / sv(5)) * (sv(0) / sv(5)) : std::numeric_limits<double>::infinity();
  if (!(normalCondition < kMaxNormalCondition))
    throw Error(ErrorKind::DegenerateGeometry, "accelerometer fit: pose set does not determine scale and bias");

  AccelParams params;
  params.scale = {p(0), p(1), p(2)};
  params.bias = {p(3), p(4), p(5)};
  Validate(params);
  return params;
}

} // namespace gyrocal
