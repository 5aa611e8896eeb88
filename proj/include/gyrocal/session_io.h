/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "gyrocal/calibration.h"
#include "gyrocal/simulation.h"

#include <filesystem>
#include <string>
#include <string_view>

namespace gyrocal
{

/*
 * Session file, version 1. Plain text, one token-separated record per line:
 *
 *   gyrocal-session 1
 *   units gyro=deg/s accel=m/s^2 time=s
 *   rotor_speed 10
 *   gravity 9.80665
 *   segment static_gyro 0 rows=2
 *   0 0.51 -0.39 1.02 0 0 9.81
 *   0.01 0.49 -0.41 0.98 0 0 9.81
 *   segment static_accel 1 rows=1 count=1000
 *   0 0 0 0 1.2 3.4 8.9
 *   segment rotating 1 rows=1 count=10000
 *   0 4.1 5.2 6.3 0 0 0
 *
 * Rows are `t gx gy gz ax ay az`. A segment with `count=N` holds exactly one
 * row that is the mean of N samples. Lines starting with '#' are comments.
 * Accepted units: gyro deg/s or rad/s, accel m/s^2 or g, time s; values are
 * converted to deg/s and m/s^2 on read.
 *
 * Segment kinds: static_gyro (raw rows only, feed the bias estimate),
 * static_accel (one per pose id), rotating (one per pose id, needs a matching
 * static_accel). static_accel segments without a rotating partner are kept
 * as accelerometer-only poses.
 */

inline constexpr std::string_view kSessionMagic = "gyrocal-session";
inline constexpr int kSessionVersion = 1;

CalibrationSession ParseSession(std::string_view text, const std::string& source = "<memory>");
CalibrationSession ReadSession(const std::filesystem::path& path);

/// Deterministic serialization (shortest round-trip number formatting).
std::string FormatSession(const CalibrationSession& session);
void WriteSession(const CalibrationSession& session, const std::filesystem::path& path);

/// Writes the session plus its ground truth to `<path>.truth`.
void WriteSession(const SyntheticSession& synthetic, const std::filesystem::path& path);

std::filesystem::path TruthPath(const std::filesystem::path& sessionPath);
std::string FormatTruth(const SessionTruth& truth);
SessionTruth ReadTruth(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string FormatNumber(double value);
std::string FormatVec3(const Vec3& v); // "x, y, z"

std::string ReadTextFile(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it into place, so readers never
/// observe a partially written file.
void WriteFileAtomically(const std::filesystem::path& path, std::string_view content);

} // namespace gyrocal
