#include "geofix/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "geofix/error.hpp"
#include "geofix/external_matcher.hpp"
#include "geofix/ncc_matcher.hpp"
#include "geofix/simulator.hpp"

namespace geofix {
namespace {

struct WindowCrop {
  BasemapWindow window;
  GrayImage raster;
};

GeoFix ProcessFrame(const PipelineContext& context, const FrameInput& frame,
                    GeoPoint center, Matcher& matcher,
                    const RunOptions& options) {
  WindowCrop crop;
  crop.window = SelectWindow(context.transform, center,
                             options.window_radius_px, frame.width,
                             frame.height);
  if (context.basemap) {
    crop.raster = context.basemap->Crop(
        static_cast<int>(crop.window.origin.u),
        static_cast<int>(crop.window.origin.v), crop.window.width,
        crop.window.height);
    crop.window.raster = &crop.raster;
  }
  MatchSet matches;
  try {
    matches = matcher.Match(frame, crop.window, options.min_confidence);
  } catch (const std::exception& e) {
    GeoFix fix;
    fix.frame_id = frame.frame_id;
    fix.failure = e.what();
    spdlog::warn("frame {}: matcher failed ({})", frame.frame_id, fix.failure);
    return fix;
  }
  if (matches.pairs.empty()) {
    spdlog::warn("frame {}: matcher returned no correspondences",
                 frame.frame_id);
  }
  return GeolocateFrame(frame.frame_id, matches, frame.width, frame.height,
                        *context.mask, context.transform, options.geolocate);
}

}  // namespace

BasemapWindow SelectWindow(const GeoTransform& t, GeoPoint center,
                           int radius_px, int frame_width, int frame_height) {
  const int side = 2 * radius_px;
  const int half_frame = (std::max(frame_width, frame_height) + 1) / 2;
  const int snap = std::max(1, radius_px - half_frame);
  const PixelPoint c = GpsToPixel(center, t);

  auto place = [&](double center_coord, int extent) {
    const double ideal = std::round(center_coord) - radius_px;
    const double snapped = std::round(ideal / snap) * snap;
    if (extent <= side) return 0.0;
    return std::clamp(snapped, 0.0, static_cast<double>(extent - side));
  };
  BasemapWindow window;
  window.origin = {place(c.u, t.width), place(c.v, t.height)};
  window.width = std::min(side, t.width);
  window.height = std::min(side, t.height);
  return window;
}

Trajectory RunPipeline(const PipelineContext& context,
                       std::span<const FrameInput> frames, Matcher& matcher,
                       const RunOptions& options) {
  if (!context.mask || context.mask->width() != context.transform.width ||
      context.mask->height() != context.transform.height) {
    throw Error(ErrorCode::kConfigInvalid, "mask does not match the basemap");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameInput& f = frames[i];
    if (i > 0 && f.frame_id <= frames[i - 1].frame_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame ids must strictly increase");
    }
    if (2 * options.window_radius_px < std::max(f.width, f.height)) {
      throw Error(ErrorCode::kConfigInvalid,
                  "window_radius_px must be at least half the frame size");
    }
  }

  Trajectory trajectory;
  trajectory.fixes.resize(frames.size());

  if (!options.independent_windows) {
    std::optional<GeoPoint> previous_ok;
    bool previous_failed = false;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (previous_failed) {
        spdlog::info("frame {}: re-centering search window on initial seed",
                     frames[i].frame_id);
      }
      const GeoPoint center =
          previous_ok ? *previous_ok : options.initial_seed;
      trajectory.fixes[i] =
          ProcessFrame(context, frames[i], center, matcher, options);
      if (trajectory.fixes[i].status == FixStatus::kOk) {
        previous_ok = trajectory.fixes[i].position;
        previous_failed = false;
      } else {
        previous_ok.reset();
        previous_failed = true;
      }
    }
  } else {
    unsigned workers = options.threads != 0
                           ? options.threads
                           : std::max(1u, std::thread::hardware_concurrency());
    if (matcher.single_flight()) workers = 1;
    workers = std::min<unsigned>(
        workers, static_cast<unsigned>(std::max<std::size_t>(1, frames.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < frames.size(); i = next++) {
        const GeoPoint center = frames[i].prior.value_or(options.initial_seed);
        trajectory.fixes[i] =
            ProcessFrame(context, frames[i], center, matcher, options);
      }
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  const auto ok = std::count_if(
      trajectory.fixes.begin(), trajectory.fixes.end(),
      [](const GeoFix& f) { return f.status == FixStatus::kOk; });
  if (ok == 0 && !frames.empty()) {
    spdlog::warn("no frame produced a fix ({} frames)", frames.size());
  }
  return trajectory;
}

PipelineContext LoadContext(const PipelineConfig& cfg) {
  PipelineContext context;
  int width = cfg.basemap_width;
  int height = cfg.basemap_height;
  if (!cfg.basemap_image.empty()) {
    try {
      context.basemap = ReadImage(cfg.basemap_image);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigInvalid, e.what());
    }
    width = context.basemap->width();
    height = context.basemap->height();
  }
  try {
    context.transform = ReadWorldFile(cfg.world_file, width, height);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  }

  std::vector<BuildingFootprint> footprints;
  if (!cfg.footprints_path.empty()) {
    try {
      footprints =
          ParseFootprintsFile(cfg.footprints_path, cfg.footprints_format)
              .footprints;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNoFootprints) {
        spdlog::warn("{}: no building footprints, mask is all ground",
                     cfg.footprints_path);
      } else {
        throw Error(ErrorCode::kConfigInvalid, e.what());
      }
    }
  } else {
    spdlog::warn("no footprints configured, mask is all ground");
  }
  context.mask = std::make_shared<const GisMask>(
      Rasterize(footprints, context.transform));
  spdlog::info("mask {}x{}: {} building pixels from {} footprints",
               context.mask->width(), context.mask->height(),
               context.mask->CountBuilding(), footprints.size());
  return context;
}

std::unique_ptr<Matcher> MakeMatcher(const PipelineConfig& cfg,
                                     const PipelineContext& context) {
  if (cfg.matcher.backend == "synthetic") {
    if (!cfg.simulation) {
      throw Error(ErrorCode::kConfigInvalid,
                  "synthetic backend needs a [simulation] section");
    }
    return std::make_unique<SyntheticMatcher>(
        context.mask, cfg.simulation->matches, cfg.simulation->match_seed);
  }
  if (!context.basemap) {
    throw Error(ErrorCode::kConfigInvalid,
                "backend '" + cfg.matcher.backend +
                    "' needs basemap.image");
  }
  if (cfg.matcher.backend == "external") {
    return std::make_unique<ExternalProcessMatcher>(
        ExternalMatcherConfig{cfg.matcher.command, cfg.matcher.timeout_ms});
  }
  return std::make_unique<NccMatcher>(cfg.matcher.ncc);
}

RunOptions MakeRunOptions(const PipelineConfig& cfg) {
  RunOptions options;
  options.geolocate.filter = cfg.filter;
  options.geolocate.ransac = cfg.ransac;
  options.min_confidence = cfg.matcher.min_confidence;
  options.window_radius_px = cfg.window_radius_px;
  options.initial_seed = *cfg.initial_seed;
  return options;
}

std::vector<FrameInput> LoadFrames(const PipelineConfig& cfg,
                                   const PipelineContext& context) {
  std::vector<FrameInput> frames;
  if (cfg.simulation) {
    const auto sim = GenerateFlight(cfg.simulation->flight, context.transform);
    for (const SimFrame& s : sim) {
      FrameInput f;
      f.frame_id = s.frame_id;
      f.width = s.width;
      f.height = s.height;
      f.gt_h = s.gt_h;
      f.prior = s.gt_position;
      if (cfg.simulation->render) {
        if (!context.basemap) {
          throw Error(ErrorCode::kConfigInvalid,
                      "simulation.render needs basemap.image");
        }
        f.raster = RenderFrame(s, *context.basemap);
      }
      frames.push_back(std::move(f));
    }
    return frames;
  }

  std::ifstream in(cfg.frames_list);
  if (!in) {
    throw Error(ErrorCode::kConfigInvalid,
                "cannot open frames list " + cfg.frames_list);
  }
  const auto base = std::filesystem::path(cfg.frames_list).parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("frame_id", 0) == 0 || line[0] == '#') {
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string field; std::getline(ls, field, ',');) {
      fields.push_back(field);
    }
    if (fields.size() != 2 && fields.size() != 4) {
      throw Error(ErrorCode::kConfigInvalid,
                  cfg.frames_list + ":" + std::to_string(line_no) +
                      ": expected frame_id,path[,prior_lat,prior_lon]");
    }
    FrameInput f;
    try {
      f.frame_id = std::stoll(fields[0]);
      std::filesystem::path image(fields[1]);
      if (image.is_relative()) image = base / image;
      f.raster = ReadImage(image.string());
      if (fields.size() == 4) {
        f.prior = GeoPoint{std::stod(fields[2]), std::stod(fields[3])};
      }
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kConfigInvalid,
                  cfg.frames_list + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
    f.width = f.raster.width();
    f.height = f.raster.height();
    frames.push_back(std::move(f));
  }
  return frames;
}

GroundTruth SimulatedGroundTruth(const PipelineConfig& cfg,
                                 const PipelineContext& context) {
  if (!cfg.simulation) {
    throw Error(ErrorCode::kConfigInvalid, "no [simulation] section");
  }
  GroundTruth gt;
  for (const SimFrame& s :
       GenerateFlight(cfg.simulation->flight, context.transform)) {
    gt[s.frame_id] = s.gt_position;
  }
  return gt;
}

}  // namespace geofix
