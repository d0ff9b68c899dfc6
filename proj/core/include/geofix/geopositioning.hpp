#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geofix/geodesy.hpp"
#include "geofix/gis_filter.hpp"
#include "geofix/gis_mask.hpp"
#include "geofix/homography.hpp"

namespace geofix {

using Quad = std::array<PixelPoint, 4>;

enum class FixStatus { kOk, kNoFix };

std::string_view ToString(FixStatus status);

struct GeoFix {
  std::int64_t frame_id = 0;
  FixStatus status = FixStatus::kNoFix;
  GeoPoint position;  // meaningful for kOk only
  Quad quad{};        // full-basemap pixels, kOk only
  FilterBranch branch = FilterBranch::kUnion;
  std::size_t n_valid_matches = 0;
  double mean_reprojection_px = 0.0;
  std::string failure;  // reason for kNoFix
};

struct Trajectory {
  std::vector<GeoFix> fixes;  // strictly increasing frame_id
};

/// Maps the frame corners (0,0), (w,0), (w,h), (0,h) through h and offsets
/// them by the window origin. Throws Error(kPointAtInfinity) or
/// Error(kDegenerateQuad) for a self-intersecting or < 1 px^2 quad.
Quad ProjectFrame(const Homography& h, int frame_width, int frame_height,
                  PixelPoint window_origin);

/// Signed shoelace area (positive for clockwise order in image axes, i.e.
/// counter-clockwise in a y-up frame).
double SignedArea(const Quad& quad);
bool IsSimple(const Quad& quad);

/// Uniform-density area centroid (first moment over area). Throws
/// Error(kDegenerateQuad) for a non-simple or zero-area quad.
PixelPoint Centroid(const Quad& quad);

struct GeolocateOptions {
  FilterConfig filter;
  RansacConfig ransac;
  bool use_gis_filter = true;
};

/// label -> select -> RANSAC -> project -> centroid -> GPS for one frame.
/// Never throws; every failure comes back as kNoFix with a reason.
GeoFix GeolocateFrame(std::int64_t frame_id, const MatchSet& matches,
                      int frame_width, int frame_height, const GisMask& mask,
                      const GeoTransform& transform,
                      const GeolocateOptions& options);

}  // namespace geofix
