#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "geofix/geodesy.hpp"
#include "geofix/gis_mask.hpp"
#include "geofix/homography.hpp"
#include "geofix/matching.hpp"
#include "geofix/raster.hpp"

namespace geofix {

struct SimFlight {
  std::vector<GeoPoint> waypoints;
  int frame_width = 512;
  int frame_height = 512;
  double step_m = 3.0;
  double scale_jitter = 0.0;         // max relative scale change, <= 0.02
  double rotation_jitter_deg = 0.0;  // max |rotation|, < 1 degree
  std::uint64_t seed = 0;

  void Validate() const;
};

struct SimFrame {
  std::int64_t frame_id = 0;
  GeoPoint gt_position;
  Homography gt_h;  // frame -> full basemap
  int width = 0;
  int height = 0;
  std::optional<GrayImage> raster;
};

/// The frame point that gt_h maps onto the ground-truth position. Matches
/// the centroid convention of the projected corner quad.
PixelPoint FrameCenter(int width, int height);

/// Samples the waypoint polyline every step_m meters (the final waypoint is
/// included when it falls on a step within 1 mm). Each gt_h is
/// T(center) * R(jitter) * S(1 + jitter) * T(-frame_center) with per-frame
/// jitter drawn from a stream derived from (seed, frame index).
/// Throws Error(kWaypointOutsideBasemap).
std::vector<SimFrame> GenerateFlight(const SimFlight& flight,
                                     const GeoTransform& t);

/// Warps the basemap into the frame through gt_h (bilinear).
GrayImage RenderFrame(const SimFrame& frame, const GrayImage& basemap);

/// Synthetic matches for a simulated frame in full-basemap coordinates.
MatchSet EmitMatches(const SimFrame& frame, const GisMask& mask,
                     const SyntheticMatchConfig& cfg, std::uint64_t seed);

}  // namespace geofix
