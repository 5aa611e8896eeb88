/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/config_io.h"

#include "gyrocal/error.h"
#include "gyrocal/session_io.h"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace gyrocal
{
namespace
{
std::string_view Trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitCommas(std::string_view s)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;)
  {
    const auto comma = s.find(',', start);
    parts.push_back(Trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return parts;
}

[[noreturn]] void TypeError(const KeyValue& e, const std::string& expected)
{
  throw Error(ErrorKind::Config,
              e.Where() + "key '" + e.key + "': expected " + expected + ", got '" + e.value + "'");
}

bool ToDouble(std::string_view token, double& out)
{
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && std::isfinite(out);
}

std::vector<double> Numbers(const KeyValue& e, const std::string& expected)
{
  std::vector<double> values;
  for (std::string_view part : SplitCommas(e.value))
  {
    double v = 0.0;
    if (!ToDouble(part, v))
      TypeError(e, expected);
    values.push_back(v);
  }
  return values;
}

std::size_t Count(const KeyValue& e)
{
  const long long v = ParseIntegerValue(e);
  if (v < 0)
    TypeError(e, "a non-negative integer");
  return static_cast<std::size_t>(v);
}

template <typename Target>
using Setter = std::function<void(Target&, const KeyValue&)>;

template <typename Target>
Target Apply(const KeyValues& entries, const std::map<std::string, Setter<Target>>& setters, Target target)
{
  for (const KeyValue& e : entries)
  {
    const auto it = setters.find(e.key);
    if (it == setters.end())
      throw Error(ErrorKind::Config, e.Where() + "unknown key '" + e.key + "'");
    it->second(target, e);
  }
  return target;
}

const std::map<std::string, Setter<SimConfig>>& SimConfigSetters()
{
  static const std::map<std::string, Setter<SimConfig>> setters = {
      {"seed",
       [](SimConfig& c, const KeyValue& e) {
         std::uint64_t v = 0;
         const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
         if (ec != std::errc() || ptr != e.value.data() + e.value.size())
           TypeError(e, "an unsigned 64-bit integer");
         c.seed = v;
       }},
      {"pose_count", [](SimConfig& c, const KeyValue& e) { c.pose_count = static_cast<int>(ParseIntegerValue(e)); }},
      {"rotor_speed", [](SimConfig& c, const KeyValue& e) { c.rotor_speed = ParseNumberValue(e); }},
      {"rotor_noise_fraction",
       [](SimConfig& c, const KeyValue& e) { c.rotor_noise_fraction = ParseNumberValue(e); }},
      {"gyro_noise_sigma",
       [](SimConfig& c, const KeyValue& e) {
         const auto v = Numbers(e, "a number or three numbers");
         if (v.size() == 1)
           c.gyro_noise_sigma = {v[0], v[0], v[0]};
         else if (v.size() == 3)
           c.gyro_noise_sigma = {v[0], v[1], v[2]};
         else
           TypeError(e, "a number or three numbers");
       }},
      {"accel_noise_sigma", [](SimConfig& c, const KeyValue& e) { c.accel_noise_sigma = ParseNumberValue(e); }},
      {"gyro_scale_range", [](SimConfig& c, const KeyValue& e) { c.gyro_scale_range = ParseRangeValue(e); }},
      {"gyro_scale", [](SimConfig& c, const KeyValue& e) { c.gyro_scale = ParseVec3Value(e); }},
      {"gyro_bias_range", [](SimConfig& c, const KeyValue& e) { c.gyro_bias_range = ParseRangeValue(e); }},
      {"gyro_bias", [](SimConfig& c, const KeyValue& e) { c.gyro_bias = ParseVec3Value(e); }},
      {"accel_errors",
       [](SimConfig& c, const KeyValue& e) {
         if (e.value == "ideal")
           c.accel_errors = false;
         else if (e.value == "uniform")
           c.accel_errors = true;
         else
           TypeError(e, "'ideal' or 'uniform'");
       }},
      {"accel_scale_range", [](SimConfig& c, const KeyValue& e) { c.accel_scale_range = ParseRangeValue(e); }},
      {"accel_bias_range", [](SimConfig& c, const KeyValue& e) { c.accel_bias_range = ParseRangeValue(e); }},
      {"samples_per_pose", [](SimConfig& c, const KeyValue& e) { c.samples_per_pose = Count(e); }},
      {"static_accel_samples", [](SimConfig& c, const KeyValue& e) { c.static_accel_samples = Count(e); }},
      {"static_gyro_samples", [](SimConfig& c, const KeyValue& e) { c.static_gyro_samples = Count(e); }},
      {"accel_cal_poses", [](SimConfig& c, const KeyValue& e) { c.accel_cal_poses = Count(e); }},
      {"raw_rotating_samples", [](SimConfig& c, const KeyValue& e) { c.raw_rotating_samples = Count(e); }},
      {"rotation_axis", [](SimConfig& c, const KeyValue& e) { c.rotation_axis = ParseVec3Value(e); }},
      {"gravity_direction", [](SimConfig& c, const KeyValue& e) { c.gravity_direction = ParseVec3Value(e); }},
      {"pose_angles", [](SimConfig& c, const KeyValue& e) { c.pose_angles_deg = ParseListValue(e); }},
      {"redraw_poses", [](SimConfig& c, const KeyValue& e) { c.redraw_poses = ParseBoolValue(e); }},
      {"estimate_bias", [](SimConfig& c, const KeyValue& e) { c.estimate_bias = ParseBoolValue(e); }},
      {"accel_calibration",
       [](SimConfig& c, const KeyValue& e) {
         if (e.value == "identity")
           c.accel_calibration = AccelCalibrationMode::Identity;
         else if (e.value == "fit")
           c.accel_calibration = AccelCalibrationMode::Fit;
         else
           TypeError(e, "'identity' or 'fit'");
       }},
      {"centrifugal",
       [](SimConfig& c, const KeyValue& e) {
         if (e.value == "on")
           c.centrifugal = true;
         else if (e.value == "off")
           c.centrifugal = false;
         else
           TypeError(e, "'on' or 'off'");
       }},
      {"lever_arm", [](SimConfig& c, const KeyValue& e) { c.lever_arm = ParseVec3Value(e); }},
      {"gravity", [](SimConfig& c, const KeyValue& e) { c.gravity = ParseNumberValue(e); }},
  };
  return setters;
}

const std::map<std::string, Setter<CalibrationOptions>>& OptionSetters()
{
  static const std::map<std::string, Setter<CalibrationOptions>> setters = {
      {"rows",
       [](CalibrationOptions& o, const KeyValue& e) {
         if (e.value == "per_pose")
           o.rows = RowMode::PerPose;
         else if (e.value == "per_sample")
           o.rows = RowMode::PerSample;
         else
           TypeError(e, "'per_pose' or 'per_sample'");
       }},
      {"max_condition",
       [](CalibrationOptions& o, const KeyValue& e) {
         o.max_condition = ParseNumberValue(e);
         if (!(o.max_condition > 1.0))
           TypeError(e, "a number > 1");
       }},
      {"static_sample_warning",
       [](CalibrationOptions& o, const KeyValue& e) { o.static_sample_warning = Count(e); }},
      {"zero_rate_offset",
       [](CalibrationOptions& o, const KeyValue& e) { o.zero_rate_offset = ParseVec3Value(e); }},
  };
  return setters;
}
} // namespace

KeyValues ParseKeyValues(std::string_view text, const std::string& source)
{
  KeyValues entries;
  std::set<std::string> seen;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos < text.size())
  {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineNo;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty())
      continue;

    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineNo) + ": ";
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::Config, where + "expected 'key = value'");

    KeyValue entry{std::string(Trim(line.substr(0, eq))), std::string(Trim(line.substr(eq + 1))), source, lineNo};
    if (entry.key.empty())
      throw Error(ErrorKind::Config, where + "missing key");
    if (!seen.insert(entry.key).second)
      throw Error(ErrorKind::Config, where + "duplicate key '" + entry.key + "'");
    entries.push_back(std::move(entry));
  }
  return entries;
}

double ParseNumberValue(const KeyValue& e)
{
  double v = 0.0;
  if (!ToDouble(e.value, v))
    TypeError(e, "a number");
  return v;
}

long long ParseIntegerValue(const KeyValue& e)
{
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc() || ptr != e.value.data() + e.value.size())
    TypeError(e, "an integer");
  return v;
}

bool ParseBoolValue(const KeyValue& e)
{
  if (e.value == "true")
    return true;
  if (e.value == "false")
    return false;
  TypeError(e, "'true' or 'false'");
}

Vec3 ParseVec3Value(const KeyValue& e)
{
  const auto v = Numbers(e, "three comma-separated numbers");
  if (v.size() != 3)
    TypeError(e, "three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

UniformRange ParseRangeValue(const KeyValue& e)
{
  const auto v = Numbers(e, "two comma-separated numbers (low, high)");
  if (v.size() != 2)
    TypeError(e, "two comma-separated numbers (low, high)");
  return {v[0], v[1]};
}

std::vector<double> ParseListValue(const KeyValue& e)
{
  if (Trim(e.value).empty())
    return {};
  return Numbers(e, "comma-separated numbers");
}

SimConfig ParseSimConfig(std::string_view text, const std::string& source)
{
  SimConfig config = Apply(ParseKeyValues(text, source), SimConfigSetters(), SimConfig{});
  Validate(config);
  return config;
}

SimConfig ReadSimConfig(const std::filesystem::path& path)
{
  return ParseSimConfig(ReadTextFile(path), path.string());
}

CalibrationOptions ParseCalibrationOptions(std::string_view text, const std::string& source)
{
  return Apply(ParseKeyValues(text, source), OptionSetters(), CalibrationOptions{});
}

CalibrationOptions ReadCalibrationOptions(const std::filesystem::path& path)
{
  return ParseCalibrationOptions(ReadTextFile(path), path.string());
}

CalibrationParams ParseParams(std::string_view text, const std::string& source)
{
  CalibrationParams params;
  std::size_t lineNo = 0;
  std::size_t pos = 0;
  while (pos < text.size())
  {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++lineNo;

    if (line.starts_with("#"))
      line = Trim(line.substr(1));
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      continue;

    const KeyValue e{std::string(Trim(line.substr(0, eq))), std::string(Trim(line.substr(eq + 1))), source, lineNo};
    if (e.key == "gyro_scale")
    {
      params.gyro.scale = ParseVec3Value(e);
      params.has_gyro = true;
    }
    else if (e.key == "gyro_bias")
      params.gyro.bias = ParseVec3Value(e);
    else if (e.key == "accel_scale")
    {
      params.accel.scale = ParseVec3Value(e);
      params.has_accel = true;
    }
    else if (e.key == "accel_bias")
      params.accel.bias = ParseVec3Value(e);
  }

  try
  {
    Validate(params.gyro);
    Validate(params.accel);
  }
  catch (const Error& err)
  {
    throw Error(ErrorKind::Format, source + ": " + err.what());
  }
  return params;
}

CalibrationParams ReadParams(const std::filesystem::path& path)
{
  return ParseParams(ReadTextFile(path), path.string());
}

} // namespace gyrocal
