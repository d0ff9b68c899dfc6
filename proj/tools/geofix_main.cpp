// geofix: GPS-denied geolocalization of down-looking UAS frames against a
// georeferenced basemap with an OSM building filter.

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "geofix/config.hpp"
#include "geofix/error.hpp"
#include "geofix/evaluation.hpp"
#include "geofix/gis_mask.hpp"
#include "geofix/pipeline.hpp"
#include "geofix/simulator.hpp"
#include "geofix/trajectory_io.hpp"

namespace {

using namespace geofix;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNoFixes = 3;

void EnsureParent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::ofstream OpenOutput(const std::string& path) {
  EnsureParent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  return out;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteMaskOutputs(const PipelineConfig& cfg, const PipelineContext& ctx) {
  if (!cfg.output.mask_pgm.empty()) {
    EnsureParent(cfg.output.mask_pgm);
    WriteMaskPgm(cfg.output.mask_pgm, *ctx.mask);
  }
  if (!cfg.output.mask_rle.empty()) {
    auto out = OpenOutput(cfg.output.mask_rle);
    WriteMaskRle(out, *ctx.mask);
  }
}

int Run(const std::string& config_path, bool no_gis_filter,
        bool independent_windows, unsigned threads,
        const std::string& out_override) {
  PipelineConfig cfg = LoadConfig(config_path);
  if (!out_override.empty()) cfg.output.trajectory_csv = out_override;
  const PipelineContext ctx = LoadContext(cfg);
  WriteMaskOutputs(cfg, ctx);
  const std::vector<FrameInput> frames = LoadFrames(cfg, ctx);
  const auto matcher = MakeMatcher(cfg, ctx);

  RunOptions options = MakeRunOptions(cfg);
  options.geolocate.use_gis_filter = !no_gis_filter;
  options.independent_windows = independent_windows;
  options.threads = threads;

  const Trajectory trajectory = RunPipeline(ctx, frames, *matcher, options);

  std::size_t ok = 0;
  for (const GeoFix& f : trajectory.fixes) ok += f.status == FixStatus::kOk;
  if (!cfg.output.trajectory_csv.empty()) {
    auto out = OpenOutput(cfg.output.trajectory_csv);
    WriteTrajectoryCsv(out, trajectory);
  } else {
    WriteTrajectoryCsv(std::cout, trajectory);
  }
  if (!cfg.output.trajectory_geojson.empty()) {
    auto out = OpenOutput(cfg.output.trajectory_geojson);
    WriteTrajectoryGeoJson(out, trajectory);
  }
  spdlog::info("{} frames, {} fixes ({} matcher, GIS filter {})",
               trajectory.fixes.size(), ok, matcher->name(),
               no_gis_filter ? "off" : "on");
  if (ok == 0) spdlog::warn("trajectory contains no Ok fix");
  return kExitOk;
}

int Simulate(const std::string& config_path) {
  const PipelineConfig cfg = LoadConfig(config_path);
  if (!cfg.simulation) {
    throw Error(ErrorCode::kConfigInvalid, "config has no [simulation]");
  }
  const PipelineContext ctx = LoadContext(cfg);
  WriteMaskOutputs(cfg, ctx);
  const auto frames = GenerateFlight(cfg.simulation->flight, ctx.transform);

  GroundTruth gt;
  for (const SimFrame& f : frames) gt[f.frame_id] = f.gt_position;
  if (!cfg.output.ground_truth_csv.empty()) {
    auto out = OpenOutput(cfg.output.ground_truth_csv);
    WriteGroundTruthCsv(out, gt);
  } else {
    WriteGroundTruthCsv(std::cout, gt);
  }

  if (cfg.simulation->render) {
    if (!ctx.basemap) {
      throw Error(ErrorCode::kConfigInvalid,
                  "simulation.render needs basemap.image");
    }
    if (cfg.simulation->frames_dir.empty()) {
      throw Error(ErrorCode::kConfigInvalid,
                  "simulation.render needs simulation.frames_dir");
    }
    const std::filesystem::path dir(cfg.simulation->frames_dir);
    std::filesystem::create_directories(dir);
    auto list = OpenOutput((dir / "frames.csv").string());
    list << "frame_id,path,prior_lat,prior_lon\n";
    for (const SimFrame& f : frames) {
      const std::string name = fmt::format("frame_{:05d}.pgm", f.frame_id);
      WritePgm((dir / name).string(), RenderFrame(f, *ctx.basemap));
      list << fmt::format("{},{},{:.9f},{:.9f}\n", f.frame_id, name,
                          f.gt_position.lat, f.gt_position.lon);
    }
    spdlog::info("rendered {} frames into {}", frames.size(), dir.string());
  }
  spdlog::info("simulated {} frames", frames.size());
  return kExitOk;
}

int Eval(const std::string& pred_path, const std::string& gt_path,
         const std::string& out_path, const std::string& sequence) {
  const Trajectory pred = ReadTrajectoryCsvFile(pred_path);
  const GroundTruth gt = ReadGroundTruthCsvFile(gt_path);
  const EvaluationReport report = Evaluate(pred, gt, sequence);
  std::cout << FormatReport(report);
  if (!out_path.empty()) {
    auto out = OpenOutput(out_path);
    out << ReportToJson(std::span(&report, 1));
  }
  return kExitOk;
}

int Compare(const std::string& a_path, const std::string& b_path) {
  const auto a = ReportsFromJson(Slurp(a_path));
  const auto b = ReportsFromJson(Slurp(b_path));
  std::cout << FormatTable(CompareRuns(a, b));
  return kExitOk;
}

int PlotData(const std::string& pred_path, const std::string& gt_path,
             const std::string& out_path) {
  const Trajectory pred = ReadTrajectoryCsvFile(pred_path);
  const GroundTruth gt = ReadGroundTruthCsvFile(gt_path);
  if (out_path.empty()) {
    WritePlotData(std::cout, pred, gt);
  } else {
    auto out = OpenOutput(out_path);
    WritePlotData(out, pred, gt);
  }
  return kExitOk;
}

int ExitCodeFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kWaypointOutsideBasemap:
      return kExitConfig;
    case ErrorCode::kNoOkFrames:
      return kExitNoFixes;
    default:
      return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geofix: UAS frame geolocalization against a georeferenced "
               "basemap with an OSM building filter"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string config, pred, gt, out, sequence;
  bool no_gis_filter = false;
  bool independent_windows = false;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Geolocate every frame of a sequence");
  run->add_option("--config", config, "Pipeline config file")->required();
  run->add_flag("--no-gis-filter", no_gis_filter,
                "Estimate from all matches (baseline)");
  run->add_flag("--independent-windows", independent_windows,
                "Search each frame around its own prior; frames run in "
                "parallel");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_option("--out", out,
                  "Trajectory CSV, overrides output.trajectory_csv");

  auto* simulate = app.add_subcommand(
      "simulate", "Write ground truth (and optional frames) of a simulated "
                  "flight");
  simulate->add_option("--config", config, "Pipeline config file")->required();

  auto* eval = app.add_subcommand("eval", "MAE / Max against ground truth");
  eval->add_option("--pred", pred, "Trajectory CSV")->required();
  eval->add_option("--gt", gt, "Ground truth CSV")->required();
  eval->add_option("--out", out, "Write the report as JSON");
  eval->add_option("--sequence", sequence, "Sequence name in the report");

  std::string report_a, report_b;
  auto* compare = app.add_subcommand(
      "compare", "Improvement of report b over report a");
  compare->add_option("--a", report_a, "Report without GIS filter")
      ->required();
  compare->add_option("--b", report_b, "Report with GIS filter")->required();

  auto* plot = app.add_subcommand("plot-data",
                                  "Long-form CSV of predicted vs ground truth");
  plot->add_option("--pred", pred, "Trajectory CSV")->required();
  plot->add_option("--gt", gt, "Ground truth CSV")->required();
  plot->add_option("--out", out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  spdlog::set_default_logger(spdlog::stderr_color_mt("geofix"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*run) {
      return Run(config, no_gis_filter, independent_windows, threads, out);
    }
    if (*simulate) return Simulate(config);
    if (*eval) return Eval(pred, gt, out, sequence);
    if (*compare) return Compare(report_a, report_b);
    if (*plot) return PlotData(pred, gt, out);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
