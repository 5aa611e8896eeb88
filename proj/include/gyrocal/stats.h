/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/vec3.h"

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace gyrocal
{

struct SummaryStats
{
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;        // unbiased (n - 1)
  double skewness = 0.0;        // adjusted Fisher-Pearson G1
  double excess_kurtosis = 0.0; // bias-corrected G2, zero for a Gaussian
  double min = 0.0;
  double max = 0.0;
  double range = 0.0;
  double mean_abs = 0.0;
  // Zero variance: skewness and kurtosis are reported as 0.
  bool degenerate = false;
};

/// Needs at least two values. G1 needs three and G2 four; shorter series fall
/// back to the plain moment ratios.
SummaryStats Summarize(std::span<const double> data);

enum class SeriesLabel
{
  Uncalibrated,
  Calibrated,
  Rotating,
  Static,
};

std::string_view ToString(SeriesLabel label);

struct DotProductSeries
{
  std::vector<double> values;
  SeriesLabel label = SeriesLabel::Uncalibrated;
};

DotProductSeries DotProducts(std::span<const Vec3> accel, std::span<const Vec3> gyro, SeriesLabel label);

inline constexpr std::array<double, 5> kReportQuantiles{0.05, 0.25, 0.50, 0.75, 0.95};

struct DistributionComparison
{
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_diff = 0.0;      // |mean_a - mean_b|
  double variance_ratio = 1.0; // var_a / var_b; 1 when both are zero
  std::array<double, 5> quantiles_a{};
  std::array<double, 5> quantiles_b{};
};

DistributionComparison CompareDistributions(const DotProductSeries& a, const DotProductSeries& b);

/// Linear-interpolation quantile (numpy's default), p in [0, 1].
double Quantile(std::vector<double> values, double p);

} // namespace gyrocal
