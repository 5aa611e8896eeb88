/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/stats.h"

#include "gyrocal/error.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gyrocal
{
namespace
{
double Mean(std::span<const double> data)
{
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : data)
  {
    const double y = v - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(data.size());
}

double PopulationVariance(std::span<const double> data, double mean)
{
  double m2 = 0.0;
  for (double v : data)
    m2 += (v - mean) * (v - mean);
  return m2 / static_cast<double>(data.size());
}
} // namespace

SummaryStats Summarize(std::span<const double> data)
{
  if (data.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "summary statistics need at least two values");

  SummaryStats s;
  s.n = data.size();
  const double n = static_cast<double>(s.n);
  s.mean = Mean(data);

  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  double absSum = 0.0;
  s.min = data[0];
  s.max = data[0];
  for (double v : data)
  {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    absSum += std::abs(v);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.range = s.max - s.min;
  s.mean_abs = absSum / n;
  s.variance = m2 * n / (n - 1.0);

  if (!(m2 > 0.0) || s.range == 0.0)
  {
    s.variance = 0.0;
    s.degenerate = true;
    return s;
  }

  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  s.skewness = s.n >= 3 ? g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0) : g1;
  s.excess_kurtosis =
      s.n >= 4 ? (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0) : g2;
  return s;
}

std::string_view ToString(SeriesLabel label)
{
  switch (label)
  {
    case SeriesLabel::Uncalibrated:
      return "uncalibrated";
    case SeriesLabel::Calibrated:
      return "calibrated";
    case SeriesLabel::Rotating:
      return "rotating";
    case SeriesLabel::Static:
      return "static";
  }
  return "unknown";
}

DotProductSeries DotProducts(std::span<const Vec3> accel, std::span<const Vec3> gyro, SeriesLabel label)
{
  if (accel.size() != gyro.size())
    throw Error(ErrorKind::InvalidArgument, "dot product series: accel and gyro lengths differ");
  if (accel.empty())
    throw Error(ErrorKind::InvalidArgument, "dot product series: no data");

  DotProductSeries series;
  series.label = label;
  series.values.reserve(accel.size());
  for (std::size_t i = 0; i < accel.size(); ++i)
    series.values.push_back(Dot(accel[i], gyro[i]));
  return series;
}

double Quantile(std::vector<double> values, double p)
{
  if (values.empty())
    throw Error(ErrorKind::InvalidArgument, "quantile of empty series");
  std::sort(values.begin(), values.end());
  const double position = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const std::size_t upper = std::min(lower + 1, values.size() - 1);
  const double fraction = position - static_cast<double>(lower);
  return values[lower] + fraction * (values[upper] - values[lower]);
}

DistributionComparison CompareDistributions(const DotProductSeries& a, const DotProductSeries& b)
{
  if (a.values.empty() || b.values.empty())
    throw Error(ErrorKind::InvalidArgument, "compare distributions: empty series");

  auto variance = [](std::span<const double> v, double mean) {
    return v.size() < 2 ? 0.0 : PopulationVariance(v, mean) * static_cast<double>(v.size()) /
                                    static_cast<double>(v.size() - 1);
  };

  DistributionComparison c;
  c.mean_a = Mean(a.values);
  c.mean_b = Mean(b.values);
  c.mean_diff = std::abs(c.mean_a - c.mean_b);
  const double varA = variance(a.values, c.mean_a);
  const double varB = variance(b.values, c.mean_b);
  if (varA == 0.0 && varB == 0.0)
    c.variance_ratio = 1.0;
  else if (varB == 0.0)
    c.variance_ratio = std::numeric_limits<double>::infinity();
  else
    c.variance_ratio = varA / varB;

  for (std::size_t i = 0; i < kReportQuantiles.size(); ++i)
  {
    c.quantiles_a[i] = Quantile(a.values, kReportQuantiles[i]);
    c.quantiles_b[i] = Quantile(b.values, kReportQuantiles[i]);
  }
  return c;
}

} // namespace gyrocal
