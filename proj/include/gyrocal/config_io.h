/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/calibration.h"
#include "gyrocal/sensor_models.h"
#include "gyrocal/simulation.h"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gyrocal
{

/// One `key = value` line. Values are kept as text until a typed accessor
/// converts them, so error messages can name the key and line.
struct KeyValue
{
  std::string key;
  std::string value;
  std::string source;
  std::size_t line = 0;

  std::string Where() const { return source + ":" + std::to_string(line) + ": "; }
};

using KeyValues = std::vector<KeyValue>;

/// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Duplicate keys and lines without '=' are Config errors.
KeyValues ParseKeyValues(std::string_view text, const std::string& source);

double ParseNumberValue(const KeyValue& entry);
long long ParseIntegerValue(const KeyValue& entry);
bool ParseBoolValue(const KeyValue& entry);
Vec3 ParseVec3Value(const KeyValue& entry);
UniformRange ParseRangeValue(const KeyValue& entry);
std::vector<double> ParseListValue(const KeyValue& entry);

/// Unknown keys are rejected. Missing keys keep SimConfig defaults.
SimConfig ParseSimConfig(std::string_view text, const std::string& source = "<memory>");
SimConfig ReadSimConfig(const std::filesystem::path& path);

/// Keys: rows (per_pose | per_sample), max_condition, static_sample_warning,
/// zero_rate_offset.
CalibrationOptions ParseCalibrationOptions(std::string_view text, const std::string& source = "<memory>");
CalibrationOptions ReadCalibrationOptions(const std::filesystem::path& path);

/// Calibration parameters as written by `gyrocal calibrate --report`.
struct CalibrationParams
{
  GyroParams gyro;
  AccelParams accel;
  bool has_gyro = false;
  bool has_accel = false;
};

/// Reads gyro_scale / gyro_bias / accel_scale / accel_bias from a params file
/// or from the `# key = value` metadata of a calibration report. Other keys
/// and table rows are ignored.
CalibrationParams ParseParams(std::string_view text, const std::string& source = "<memory>");
CalibrationParams ReadParams(const std::filesystem::path& path);

} // namespace gyrocal
