#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "geofix/config.hpp"
#include "geofix/evaluation.hpp"
#include "geofix/geopositioning.hpp"
#include "geofix/gis_mask.hpp"
#include "geofix/matching.hpp"
#include "geofix/raster.hpp"

namespace geofix {

/// Shared read-only inputs of a run.
struct PipelineContext {
  GeoTransform transform;
  std::shared_ptr<const GisMask> mask;
  std::optional<GrayImage> basemap;
};

struct RunOptions {
  GeolocateOptions geolocate;
  double min_confidence = 0.2;
  int window_radius_px = 768;
  GeoPoint initial_seed;
  /// Window per frame from FrameInput::prior (or the seed) instead of the
  /// previous fix; frames then run concurrently unless the matcher is
  /// single-flight.
  bool independent_windows = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Square window of side 2 * radius around `center`, clamped into the
/// basemap. The origin is snapped to a grid of max(1, radius - half the
/// larger frame side) pixels so consecutive frames reuse the same window
/// (and its cached features) while the frame still fits inside.
BasemapWindow SelectWindow(const GeoTransform& t, GeoPoint center,
                           int radius_px, int frame_width, int frame_height);

/// Runs every frame and never aborts mid-sequence: matcher and estimation
/// failures become kNoFix entries. In sequential mode frame n searches
/// around the fix of frame n-1 when that fix is Ok, otherwise around the
/// initial seed. Throws Error(kConfigInvalid) for bad options and
/// Error(kInvalidArgument) when frame ids do not strictly increase.
Trajectory RunPipeline(const PipelineContext& context,
                       std::span<const FrameInput> frames, Matcher& matcher,
                       const RunOptions& options);

// Assembly helpers used by the CLI.
PipelineContext LoadContext(const PipelineConfig& cfg);
std::unique_ptr<Matcher> MakeMatcher(const PipelineConfig& cfg,
                                     const PipelineContext& context);
RunOptions MakeRunOptions(const PipelineConfig& cfg);

/// Frames from frames.list or the [simulation] section (regenerated
/// deterministically, with rasters when simulation.render is set).
std::vector<FrameInput> LoadFrames(const PipelineConfig& cfg,
                                   const PipelineContext& context);
GroundTruth SimulatedGroundTruth(const PipelineConfig& cfg,
                                 const PipelineContext& context);

}  // namespace geofix
