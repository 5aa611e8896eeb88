/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/session_io.h"

#include "gyrocal/config_io.h"
#include "gyrocal/error.h"

#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <system_error>
#include <vector>

#include <unistd.h>

namespace gyrocal
{
namespace
{
constexpr double kStaticSamplePeriod = 0.01; // s, timestamps for written static rows

std::vector<std::string_view> SplitWhitespace(std::string_view line)
{
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size())
  {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
      ++i;
    if (i > start)
      tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::optional<double> ToDouble(std::string_view token)
{
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::optional<long long> ToInteger(std::string_view token)
{
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    return std::nullopt;
  return value;
}

enum class SegmentKind
{
  StaticGyro,
  StaticAccel,
  Rotating,
};

struct Row
{
  double time;
  Vec3 gyro;
  Vec3 accel;
};

struct Segment
{
  SegmentKind kind;
  int pose_id = 0;
  std::optional<std::size_t> count;
  std::vector<Row> rows;
  std::size_t line = 0;
};

class SessionParser
{
public:
  SessionParser(std::string_view text, std::string source) : m_text(text), m_source(std::move(source)) {}

  CalibrationSession Parse()
  {
    ParseLines();
    return Assemble();
  }

private:
  [[noreturn]] void Fail(std::size_t line, const std::string& message) const
  {
    throw Error(ErrorKind::Format, m_source + ":" + std::to_string(line) + ": " + message);
  }

  [[noreturn]] void Fail(const std::string& message) const
  {
    throw Error(ErrorKind::Format, m_source + ": " + message);
  }

  double Number(std::string_view token, std::size_t line) const
  {
    const auto v = ToDouble(token);
    if (!v)
      Fail(line, "expected a number, got '" + std::string(token) + "'");
    return *v;
  }

  void ParseUnits(const std::vector<std::string_view>& tokens, std::size_t line)
  {
    for (std::size_t i = 1; i < tokens.size(); ++i)
    {
      const std::string_view t = tokens[i];
      if (t == "gyro=deg/s")
        m_gyroToDeg = 1.0;
      else if (t == "gyro=rad/s")
        m_gyroToDeg = 180.0 / std::numbers::pi;
      else if (t == "accel=m/s^2")
        m_accelInG = false;
      else if (t == "accel=g")
        m_accelInG = true;
      else if (t == "time=s")
        continue;
      else
        Fail(line, "unknown units '" + std::string(t) + "'");
    }
    m_haveUnits = true;
  }

  void ParseSegmentHeader(const std::vector<std::string_view>& tokens, std::size_t line)
  {
    if (tokens.size() < 4)
      Fail(line, "segment header needs: segment <kind> <pose_id> rows=<n> [count=<N>]");

    Segment seg;
    seg.line = line;
    if (tokens[1] == "static_gyro")
      seg.kind = SegmentKind::StaticGyro;
    else if (tokens[1] == "static_accel")
      seg.kind = SegmentKind::StaticAccel;
    else if (tokens[1] == "rotating")
      seg.kind = SegmentKind::Rotating;
    else
      Fail(line, "unknown segment kind '" + std::string(tokens[1]) + "'");

    const auto id = ToInteger(tokens[2]);
    if (!id || *id < 0)
      Fail(line, "invalid pose id '" + std::string(tokens[2]) + "'");
    seg.pose_id = static_cast<int>(*id);

    std::optional<long long> rows;
    for (std::size_t i = 3; i < tokens.size(); ++i)
    {
      const std::string_view t = tokens[i];
      if (t.starts_with("rows="))
        rows = ToInteger(t.substr(5));
      else if (t.starts_with("count="))
      {
        const auto count = ToInteger(t.substr(6));
        if (!count || *count < 1)
          Fail(line, "invalid count '" + std::string(t) + "'");
        seg.count = static_cast<std::size_t>(*count);
      }
      else
        Fail(line, "unexpected token '" + std::string(t) + "'");
    }
    if (!rows || *rows < 1)
      Fail(line, "segment needs rows=<n> with n >= 1");
    if (seg.count && *rows != 1)
      Fail(line, "a summary segment (count=N) holds exactly one row");
    if (seg.count && seg.kind == SegmentKind::StaticGyro)
      Fail(line, "static_gyro segments must hold raw samples");

    m_pendingRows = static_cast<std::size_t>(*rows);
    m_segments.push_back(std::move(seg));
  }

  void ParseRow(const std::vector<std::string_view>& tokens, std::size_t line)
  {
    if (tokens.size() != 7)
      Fail(line, "expected 7 numeric fields (t gx gy gz ax ay az), got " + std::to_string(tokens.size()));
    Row row;
    row.time = Number(tokens[0], line);
    row.gyro = Vec3{Number(tokens[1], line), Number(tokens[2], line), Number(tokens[3], line)} * m_gyroToDeg;
    row.accel = {Number(tokens[4], line), Number(tokens[5], line), Number(tokens[6], line)};
    if (m_accelInG)
      row.accel = row.accel * m_gravity;

    Segment& seg = m_segments.back();
    if (!seg.rows.empty() && row.time < seg.rows.back().time)
      Fail(line, "timestamps decrease within segment");
    seg.rows.push_back(row);
    --m_pendingRows;
  }

  void ParseLines()
  {
    std::size_t lineNo = 0;
    std::size_t pos = 0;
    bool sawMagic = false;
    while (pos <= m_text.size())
    {
      const std::size_t end = std::min(m_text.find('\n', pos), m_text.size());
      const std::string_view line = m_text.substr(pos, end - pos);
      pos = end + 1;
      ++lineNo;

      const auto tokens = SplitWhitespace(line);
      if (tokens.empty() || tokens[0].starts_with("#"))
      {
        if (end == m_text.size())
          break;
        continue;
      }

      if (!sawMagic)
      {
        if (tokens[0] != kSessionMagic || tokens.size() != 2)
          Fail(lineNo, "not a gyrocal session file");
        if (tokens[1] != std::to_string(kSessionVersion))
          Fail(lineNo, "unsupported format version " + std::string(tokens[1]));
        sawMagic = true;
      }
      else if (m_pendingRows > 0)
      {
        ParseRow(tokens, lineNo);
      }
      else if (tokens[0] == "segment")
      {
        RequireHeader(lineNo);
        ParseSegmentHeader(tokens, lineNo);
      }
      else if (!m_segments.empty())
      {
        Fail(lineNo, "row outside a segment (check rows=<n>)");
      }
      else if (tokens[0] == "units")
      {
        ParseUnits(tokens, lineNo);
      }
      else if (tokens[0] == "rotor_speed" && tokens.size() == 2)
      {
        m_rotorSpeed = Number(tokens[1], lineNo);
      }
      else if (tokens[0] == "gravity" && tokens.size() == 2)
      {
        m_gravity = Number(tokens[1], lineNo);
        if (!(m_gravity > 0.0))
          Fail(lineNo, "gravity must be positive");
      }
      else
      {
        Fail(lineNo, "unexpected header line '" + std::string(line) + "'");
      }

      if (end == m_text.size())
        break;
    }

    if (!sawMagic)
      Fail("empty file");
    if (m_pendingRows > 0)
      Fail("file ends inside a segment (" + std::to_string(m_pendingRows) + " rows missing)");
    RequireHeader(lineNo);
  }

  void RequireHeader(std::size_t line) const
  {
    if (!m_haveUnits)
      Fail(line, "missing 'units' header");
    if (!m_rotorSpeed)
      Fail(line, "missing 'rotor_speed' header");
    if (!(*m_rotorSpeed > 0.0))
      Fail(line, "rotor_speed must be positive");
  }

  CalibrationSession Assemble() const
  {
    CalibrationSession session;
    session.rotor_speed = *m_rotorSpeed * m_gyroToDeg;
    session.gravity = m_gravity;

    std::map<int, const Segment*> accelSegments;
    std::map<int, const Segment*> rotatingSegments;
    std::vector<int> rotatingOrder;
    std::vector<int> accelOrder;
    for (const Segment& seg : m_segments)
    {
      if (seg.kind == SegmentKind::StaticGyro)
      {
        for (const Row& row : seg.rows)
          session.static_gyro.push_back(row.gyro);
        continue;
      }
      auto& index = seg.kind == SegmentKind::StaticAccel ? accelSegments : rotatingSegments;
      if (!index.emplace(seg.pose_id, &seg).second)
        Fail(seg.line, "duplicate segment for pose " + std::to_string(seg.pose_id));
      (seg.kind == SegmentKind::StaticAccel ? accelOrder : rotatingOrder).push_back(seg.pose_id);
    }

    for (int id : rotatingOrder)
    {
      const auto accel = accelSegments.find(id);
      if (accel == accelSegments.end())
        Fail("rotating segment for pose " + std::to_string(id) + " has no static_accel segment");
      const Segment& rot = *rotatingSegments.at(id);
      const Segment& sta = *accel->second;

      PoseObservation pose;
      pose.pose_id = id;
      std::tie(pose.accel_mean, pose.accel_sample_count) = AccelMean(sta);
      if (rot.count)
      {
        pose.gyro_mean = rot.rows.front().gyro;
        pose.sample_count = *rot.count;
      }
      else
      {
        std::vector<Vec3> gyros;
        gyros.reserve(rot.rows.size());
        for (const Row& row : rot.rows)
        {
          gyros.push_back(row.gyro);
          pose.rotating_samples.push_back({row.time, row.gyro, row.accel});
        }
        pose.gyro_mean = ComponentMean(gyros);
        pose.sample_count = rot.rows.size();
      }
      session.poses.push_back(std::move(pose));
    }

    for (int id : accelOrder)
    {
      if (rotatingSegments.contains(id))
        continue;
      StaticAccelObservation obs;
      obs.pose_id = id;
      std::tie(obs.accel_mean, obs.sample_count) = AccelMean(*accelSegments.at(id));
      session.accel_only_poses.push_back(obs);
    }
    return session;
  }

  static std::pair<Vec3, std::size_t> AccelMean(const Segment& seg)
  {
    if (seg.count)
      return {seg.rows.front().accel, *seg.count};
    std::vector<Vec3> accels;
    accels.reserve(seg.rows.size());
    for (const Row& row : seg.rows)
      accels.push_back(row.accel);
    return {ComponentMean(accels), seg.rows.size()};
  }

  std::string_view m_text;
  std::string m_source;
  bool m_haveUnits = false;
  double m_gyroToDeg = 1.0;
  bool m_accelInG = false;
  std::optional<double> m_rotorSpeed;
  double m_gravity = 9.80665;
  std::vector<Segment> m_segments;
  std::size_t m_pendingRows = 0;
};

void AppendRow(std::string& out, double t, const Vec3& gyro, const Vec3& accel)
{
  out += FormatNumber(t);
  for (double v : {gyro.x, gyro.y, gyro.z, accel.x, accel.y, accel.z})
  {
    out += ' ';
    out += FormatNumber(v);
  }
  out += '\n';
}
} // namespace

std::string FormatNumber(double value)
{
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc())
    throw Error(ErrorKind::InvalidArgument, "cannot format number");
  return std::string(buffer, ptr);
}

std::string FormatVec3(const Vec3& v)
{
  return FormatNumber(v.x) + ", " + FormatNumber(v.y) + ", " + FormatNumber(v.z);
}

CalibrationSession ParseSession(std::string_view text, const std::string& source)
{
  return SessionParser(text, source).Parse();
}

std::string ReadTextFile(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw Error(ErrorKind::Io, "error reading '" + path.string() + "'");
  return buffer.str();
}

CalibrationSession ReadSession(const std::filesystem::path& path)
{
  return ParseSession(ReadTextFile(path), path.string());
}

std::string FormatSession(const CalibrationSession& session)
{
  if (session.static_gyro.empty())
    throw Error(ErrorKind::InvalidArgument, "session has no static gyro data");
  if (!(session.rotor_speed > 0.0) || !(session.gravity > 0.0))
    throw Error(ErrorKind::InvalidArgument, "session needs positive rotor speed and gravity");

  std::string out;
  out += std::string(kSessionMagic) + " " + std::to_string(kSessionVersion) + "\n";
  out += "units gyro=deg/s accel=m/s^2 time=s\n";
  out += "rotor_speed " + FormatNumber(session.rotor_speed) + "\n";
  out += "gravity " + FormatNumber(session.gravity) + "\n";
  out += "# rows: t gx gy gz ax ay az\n";

  out += "segment static_gyro 0 rows=" + std::to_string(session.static_gyro.size()) + "\n";
  for (std::size_t k = 0; k < session.static_gyro.size(); ++k)
    AppendRow(out, kStaticSamplePeriod * static_cast<double>(k), session.static_gyro[k], Vec3{});

  for (const PoseObservation& pose : session.poses)
  {
    const std::string id = std::to_string(pose.pose_id);
    out += "segment static_accel " + id + " rows=1 count=" + std::to_string(pose.accel_sample_count) + "\n";
    AppendRow(out, 0.0, Vec3{}, pose.accel_mean);

    if (pose.rotating_samples.empty())
    {
      out += "segment rotating " + id + " rows=1 count=" + std::to_string(pose.sample_count) + "\n";
      AppendRow(out, 0.0, pose.gyro_mean, Vec3{});
    }
    else
    {
      out += "segment rotating " + id + " rows=" + std::to_string(pose.rotating_samples.size()) + "\n";
      for (const RotatingSample& s : pose.rotating_samples)
        AppendRow(out, s.time, s.gyro, s.accel);
    }
  }

  for (const StaticAccelObservation& obs : session.accel_only_poses)
  {
    out += "segment static_accel " + std::to_string(obs.pose_id) +
           " rows=1 count=" + std::to_string(obs.sample_count) + "\n";
    AppendRow(out, 0.0, Vec3{}, obs.accel_mean);
  }
  return out;
}

void WriteSession(const CalibrationSession& session, const std::filesystem::path& path)
{
  WriteFileAtomically(path, FormatSession(session));
}

std::filesystem::path TruthPath(const std::filesystem::path& sessionPath)
{
  return std::filesystem::path(sessionPath.string() + ".truth");
}

std::string FormatTruth(const SessionTruth& truth)
{
  std::string out = "# ground truth of a synthetic session\n";
  out += "gyro_scale = " + FormatVec3(truth.gyro.scale) + "\n";
  out += "gyro_bias = " + FormatVec3(truth.gyro.bias) + "\n";
  out += "accel_scale = " + FormatVec3(truth.accel.scale) + "\n";
  out += "accel_bias = " + FormatVec3(truth.accel.bias) + "\n";
  out += "rotation_axis = " + FormatVec3(truth.rotation_axis) + "\n";
  out += "gravity_direction = " + FormatVec3(truth.gravity_direction) + "\n";
  out += "dot_constant = " + FormatNumber(truth.dot_constant) + "\n";
  out += "pose_angles =";
  for (std::size_t i = 0; i < truth.pose_angles_deg.size(); ++i)
    out += (i == 0 ? " " : ", ") + FormatNumber(truth.pose_angles_deg[i]);
  out += "\n";
  return out;
}

void WriteSession(const SyntheticSession& synthetic, const std::filesystem::path& path)
{
  const std::string session = FormatSession(synthetic.session);
  WriteFileAtomically(TruthPath(path), FormatTruth(synthetic.truth));
  WriteFileAtomically(path, session);
}

SessionTruth ReadTruth(const std::filesystem::path& path)
{
  const KeyValues kv = ParseKeyValues(ReadTextFile(path), path.string());
  SessionTruth truth;
  for (const KeyValue& e : kv)
  {
    if (e.key == "gyro_scale")
      truth.gyro.scale = ParseVec3Value(e);
    else if (e.key == "gyro_bias")
      truth.gyro.bias = ParseVec3Value(e);
    else if (e.key == "accel_scale")
      truth.accel.scale = ParseVec3Value(e);
    else if (e.key == "accel_bias")
      truth.accel.bias = ParseVec3Value(e);
    else if (e.key == "rotation_axis")
      truth.rotation_axis = ParseVec3Value(e);
    else if (e.key == "gravity_direction")
      truth.gravity_direction = ParseVec3Value(e);
    else if (e.key == "dot_constant")
      truth.dot_constant = ParseNumberValue(e);
    else if (e.key == "pose_angles")
      truth.pose_angles_deg = ParseListValue(e);
    else
      throw Error(ErrorKind::Format, e.Where() + "unknown key '" + e.key + "'");
  }
  return truth;
}

void WriteFileAtomically(const std::filesystem::path& path, std::string_view content)
{
  std::filesystem::path temp = path;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorKind::Io, "cannot open '" + temp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out)
    {
      std::error_code ignored;
      std::filesystem::remove(temp, ignored);
      throw Error(ErrorKind::Io, "error writing '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec)
  {
    std::error_code ignored;
    std::filesystem::remove(temp, ignored);
    throw Error(ErrorKind::Io, "cannot move '" + temp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

} // namespace gyrocal
