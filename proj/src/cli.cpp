/*
 *  Copyright (C) 2026 The gyrocal Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "gyrocal/cli.h"

#include "gyrocal/calibration.h"
#include "gyrocal/config_io.h"
#include "gyrocal/monte_carlo.h"
#include "gyrocal/session_io.h"
#include "gyrocal/simulation.h"
#include "gyrocal/stats.h"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <sstream>

namespace gyrocal::cli
{
namespace
{
namespace fs = std::filesystem;

constexpr const char* kAxisNames[3] = {"X", "Y", "Z"};

struct SimulateArgs
{
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t runs = 1;
};

struct CalibrateArgs
{
  std::string session;
  std::string accelCal = "identity";
  std::string report;
  std::string options;
  std::string rows;
};

struct MonteCarloArgs
{
  std::string config;
  std::size_t runs = 10000;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<double> noiseLevels;
  int threads = 0;
  bool serial = false;
};

struct AnalyzeArgs
{
  std::string session;
  std::string params;
  std::string report;
};

fs::path RunPath(const fs::path& out, std::size_t index)
{
  fs::path p = out;
  p.replace_filename(out.stem().string() + "." + std::to_string(index) + out.extension().string());
  return p;
}

int Simulate(const SimulateArgs& args, std::ostream& out)
{
  SimConfig config = ReadSimConfig(args.config);
  if (args.seed)
    config.seed = *args.seed;
  if (args.runs < 1)
    throw Error(ErrorKind::Config, "--runs must be >= 1");

  for (std::size_t i = 0; i < args.runs; ++i)
  {
    // A single run uses the master seed directly; batches derive one
    // independent stream per file.
    Rng rng(args.runs == 1 ? config.seed : DeriveSeed(config.seed, i + 1));
    const SyntheticSession synthetic = GenerateSession(config, rng);
    const fs::path path = args.runs == 1 ? fs::path(args.out) : RunPath(args.out, i);
    WriteSession(synthetic, path);
    out << "wrote " << path.string() << " (truth: " << TruthPath(path).string() << ")\n";
  }
  return kExitOk;
}

struct AccelChoice
{
  AccelParams params;
  std::string label;
};

AccelChoice ResolveAccel(const std::string& choice, const CalibrationSession& session)
{
  if (choice == "identity")
    return {AccelParams::Identity(), "identity"};
  if (choice == "fit")
    return {FitAccelParams(StaticAccelMeans(session), session.gravity), "fit"};

  const CalibrationParams params = ReadParams(choice);
  if (!params.has_accel)
    throw Error(ErrorKind::Format, choice + ": no accel_scale in accelerometer calibration file");
  return {params.accel, "file"};
}

std::string FormatCalibrationReport(const ScaleEstimate& e, const AccelChoice& accel, const std::string& session)
{
  std::string s = "# gyrocal calibration report\n";
  s += "# session = " + session + "\n";
  s += "# gyro_scale = " + FormatVec3(e.params.scale) + "\n";
  s += "# gyro_bias = " + FormatVec3(e.params.bias) + "\n";
  s += "# zero_rate_offset = " + FormatVec3(e.zero_rate_offset) + "\n";
  s += "# dot_constant = " + FormatNumber(e.dot_constant) + "\n";
  s += "# beta_hat = " + FormatVec3(e.beta_hat) + "\n";
  s += "# residual_norm = " + FormatNumber(e.residual_norm) + "\n";
  s += "# normal_residual = " + FormatNumber(e.normal_residual) + "\n";
  s += "# condition_number = " + FormatNumber(e.condition_number) + "\n";
  s += "# accel_calibration = " + accel.label + "\n";
  s += "# accel_scale = " + FormatVec3(accel.params.scale) + "\n";
  s += "# accel_bias = " + FormatVec3(accel.params.bias) + "\n";
  for (const std::string& w : e.warnings)
    s += "# warning = " + w + "\n";
  s += "row,dot_uncalibrated,dot_calibrated\n";
  for (std::size_t i = 0; i < e.dot_calibrated.size(); ++i)
    s += std::to_string(i + 1) + "," + FormatNumber(e.dot_uncalibrated[i]) + "," +
         FormatNumber(e.dot_calibrated[i]) + "\n";
  return s;
}

int Calibrate(const CalibrateArgs& args, std::ostream& out)
{
  CalibrationOptions options;
  if (!args.options.empty())
    options = ReadCalibrationOptions(args.options);
  if (args.rows == "per_pose")
    options.rows = RowMode::PerPose;
  else if (args.rows == "per_sample")
    options.rows = RowMode::PerSample;

  const CalibrationSession session = ReadSession(args.session);
  const AccelChoice accel = ResolveAccel(args.accelCal, session);
  const ScaleEstimate estimate = CalibrateGyroscope(session, accel.params, options);

  const std::string report = FormatCalibrationReport(estimate, accel, args.session);
  if (!args.report.empty())
    WriteFileAtomically(args.report, report);
  out << report;
  return kExitOk;
}

std::string FormatMonteCarlo(const std::vector<std::pair<double, MonteCarloReport>>& levels,
                             const SimConfig& config,
                             std::size_t runs)
{
  std::string s = "# gyrocal monte-carlo report\n";
  s += "# runs = " + std::to_string(runs) + "\n";
  s += "# seed = " + std::to_string(config.seed) + "\n";
  const MonteCarloReport& first = levels.front().second;
  s += "# rotation_axis = " + FormatVec3(first.rotation_axis) + "\n";
  s += "# gravity_direction = " + FormatVec3(first.gravity_direction) + "\n";
  s += "axis,noise_sigma,mean,variance,excess_kurtosis,skewness,"
       "error_mean,error_variance,error_range,uncalibrated_error_variance,failures\n";
  for (int a = 0; a < 3; ++a)
  {
    for (const auto& [sigma, r] : levels)
    {
      const SummaryStats& k = r.scale[a];
      const SummaryStats& err = r.scale_error[a];
      s += std::string(kAxisNames[a]) + "," + FormatNumber(sigma) + "," + FormatNumber(k.mean) + "," +
           FormatNumber(k.variance) + "," + FormatNumber(k.excess_kurtosis) + "," +
           FormatNumber(k.skewness) + "," + FormatNumber(err.mean) + "," + FormatNumber(err.variance) +
           "," + FormatNumber(err.range) + "," + FormatNumber(r.uncalibrated_error[a].variance) + "," +
           std::to_string(r.failures) + "\n";
    }
  }
  return s;
}

int MonteCarlo(const MonteCarloArgs& args, std::ostream& out)
{
  SimConfig config = ReadSimConfig(args.config);
  if (args.seed)
    config.seed = *args.seed;
  if (args.runs < 1)
    throw Error(ErrorKind::Config, "--runs must be >= 1");

  std::vector<double> sigmas = args.noiseLevels;
  const bool perAxisSigma = sigmas.empty();
  if (perAxisSigma)
    sigmas.push_back(config.gyro_noise_sigma.x);

  std::vector<std::pair<double, MonteCarloReport>> levels;
  for (double sigma : sigmas)
  {
    SimConfig level = config;
    if (!perAxisSigma)
      level.gyro_noise_sigma = {sigma, sigma, sigma};
    levels.emplace_back(sigma, args.serial ? RunMonteCarloSerial(level, args.runs)
                                           : RunMonteCarlo(level, args.runs, args.threads));
  }

  // Nothing is written until every level has finished.
  const std::string report = FormatMonteCarlo(levels, config, args.runs);
  if (!args.out.empty())
    WriteFileAtomically(args.out, report);
  out << report;
  return kExitOk;
}

void AppendSeriesRow(std::string& s, std::string_view label, const std::vector<double>& values)
{
  std::vector<double> sorted = values;
  const SummaryStats st = values.size() >= 2 ? Summarize(values) : SummaryStats{};
  s += std::string(label) + "," + std::to_string(values.size()) + "," + FormatNumber(st.mean) + "," +
       FormatNumber(st.variance) + "," + FormatNumber(st.range);
  for (double q : kReportQuantiles)
    s += "," + FormatNumber(Quantile(sorted, q));
  s += "\n";
}

int Analyze(const AnalyzeArgs& args, std::ostream& out)
{
  const CalibrationSession session = ReadSession(args.session);
  const CalibrationParams params = ReadParams(args.params);
  if (!params.has_gyro)
    throw Error(ErrorKind::Format, args.params + ": no gyro_scale in params file");

  const std::vector<Observation> rows = PrepareObservations(session, params.accel, RowMode::PerPose);
  std::vector<Vec3> accel, raw, calibrated;
  for (const Observation& row : rows)
  {
    accel.push_back(row.accel);
    raw.push_back(row.gyro);
    calibrated.push_back(ApplyGyroCalibration(params.gyro, row.gyro));
  }
  const DotProductSeries before = DotProducts(accel, raw, SeriesLabel::Uncalibrated);
  const DotProductSeries after = DotProducts(accel, calibrated, SeriesLabel::Calibrated);

  std::string s = "# gyrocal consistency report\n";
  s += "# session = " + args.session + "\n";
  s += "# gyro_scale = " + FormatVec3(params.gyro.scale) + "\n";
  s += "# gyro_bias = " + FormatVec3(params.gyro.bias) + "\n";

  const DistributionComparison poses = CompareDistributions(before, after);
  s += "# variance_reduction = " + FormatNumber(poses.variance_ratio) + "\n";

  // Static vs rotating accelerometer, both against the calibrated gyro.
  std::vector<double> staticDots, rotatingDots;
  for (std::size_t i = 0; i < session.poses.size(); ++i)
  {
    for (const RotatingSample& sample : session.poses[i].rotating_samples)
    {
      const Vec3 g = ApplyGyroCalibration(params.gyro, sample.gyro);
      const Vec3 a = ApplyAccelCalibration(params.accel, sample.accel) / session.gravity;
      staticDots.push_back(Dot(accel[i], g));
      rotatingDots.push_back(Dot(a, g));
    }
  }
  std::optional<DistributionComparison> motion;
  if (!rotatingDots.empty())
  {
    motion = CompareDistributions({rotatingDots, SeriesLabel::Rotating}, {staticDots, SeriesLabel::Static});
    s += "# rotating_static_mean_diff = " + FormatNumber(motion->mean_diff) + "\n";
    s += "# rotating_static_variance_ratio = " + FormatNumber(motion->variance_ratio) + "\n";
  }

  s += "series,n,mean,variance,range,q05,q25,q50,q75,q95\n";
  AppendSeriesRow(s, ToString(before.label), before.values);
  AppendSeriesRow(s, ToString(after.label), after.values);
  if (motion)
  {
    AppendSeriesRow(s, ToString(SeriesLabel::Rotating), rotatingDots);
    AppendSeriesRow(s, ToString(SeriesLabel::Static), staticDots);
  }

  if (!args.report.empty())
    WriteFileAtomically(args.report, s);
  out << s;
  return kExitOk;
}
} // namespace

int ExitCodeFor(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::Io:
      return kExitIo;
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
    case ErrorKind::Format:
      return kExitInput;
    case ErrorKind::DegenerateGeometry:
    case ErrorKind::NotObservable:
      return kExitDegenerate;
    case ErrorKind::SignResolution:
    case ErrorKind::NotConverged:
    case ErrorKind::TooManyFailures:
      return kExitEstimation;
  }
  return kExitEstimation;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Gyroscope scale-factor calibration from gravity/rotation dot-product consistency"};
  app.name("gyrocal");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic calibration sessions with truth sidecars");
  simulate->add_option("config", sim.config, "Simulation config file")->required();
  simulate->add_option("out", sim.out, "Output session file")->required();
  simulate->add_option("--seed", sim.seed, "Master seed (overrides config)");
  simulate->add_option("--runs", sim.runs, "Number of session files");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate gyro scale factors and bias from a session file");
  calibrate->add_option("session", cal.session, "Session file")->required();
  calibrate->add_option("--accel-cal", cal.accelCal, "identity | fit | <params file>");
  calibrate->add_option("--report", cal.report, "Write the report to this file");
  calibrate->add_option("--options", cal.options, "Calibration options file");
  calibrate->add_option("--rows", cal.rows, "per_pose | per_sample (overrides options file)")
      ->check(CLI::IsMember({"per_pose", "per_sample"}));

  MonteCarloArgs mc;
  auto* montecarlo = app.add_subcommand("montecarlo", "Run a Monte-Carlo battery and report scale-factor statistics");
  montecarlo->add_option("config", mc.config, "Simulation config file")->required();
  montecarlo->add_option("--runs", mc.runs, "Trials per noise level");
  montecarlo->add_option("--seed", mc.seed, "Master seed (overrides config)");
  montecarlo->add_option("--out", mc.out, "Write the report to this file");
  montecarlo->add_option("--noise-levels", mc.noiseLevels, "Gyro noise sigmas (deg/s), one battery each")
      ->delimiter(',');
  montecarlo->add_option("--threads", mc.threads, "OpenMP threads (0 = default)");
  montecarlo->add_flag("--serial", mc.serial, "Use the serial reference implementation");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Dot-product consistency before and after calibration");
  analyze->add_option("session", an.session, "Session file")->required();
  analyze->add_option("params", an.params, "Params file or calibration report")->required();
  analyze->add_option("--report", an.report, "Write the report to this file");

  std::vector<std::string> argvStorage;
  argvStorage.reserve(args.size() + 1);
  argvStorage.push_back("gyrocal");
  argvStorage.insert(argvStorage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argvStorage)
    argv.push_back(a.data());

  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try
  {
    if (*simulate)
      return Simulate(sim, out);
    if (*calibrate)
      return Calibrate(cal, out);
    if (*montecarlo)
      return MonteCarlo(mc, out);
    if (*analyze)
      return Analyze(an, out);
  }
  catch (const Error& e)
  {
    err << "gyrocal: " << ToString(e.Kind()) << " error: " << e.what() << "\n";
    return ExitCodeFor(e.Kind());
  }
  catch (const std::exception& e)
  {
    err << "gyrocal: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitInput;
}

} // namespace gyrocal::cli
