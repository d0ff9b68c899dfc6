#include "geofix/geopositioning.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

#include "geofix/error.hpp"

namespace geofix {
namespace {

double Cross(PixelPoint o, PixelPoint a, PixelPoint b) {
  return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

bool SegmentsIntersect(PixelPoint p1, PixelPoint p2, PixelPoint q1,
                       PixelPoint q2) {
  const double d1 = Cross(q1, q2, p1);
  const double d2 = Cross(q1, q2, p2);
  const double d3 = Cross(p1, p2, q1);
  const double d4 = Cross(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 &&
         d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

std::string_view ToString(FixStatus status) {
  return status == FixStatus::kOk ? "ok" : "nofix";
}

double SignedArea(const Quad& quad) {
  double twice = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const PixelPoint& a = quad[i];
    const PixelPoint& b = quad[(i + 1) % 4];
    twice += a.u * b.v - b.u * a.v;
  }
  return 0.5 * twice;
}

bool IsSimple(const Quad& quad) {
  for (const PixelPoint& p : quad) {
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) return false;
  }
  // Only the two pairs of opposite edges can cross in a quadrilateral.
  return !SegmentsIntersect(quad[0], quad[1], quad[2], quad[3]) &&
         !SegmentsIntersect(quad[1], quad[2], quad[3], quad[0]);
}

Quad ProjectFrame(const Homography& h, int frame_width, int frame_height,
                  PixelPoint window_origin) {
  const double w = frame_width;
  const double ht = frame_height;
  const Quad corners{PixelPoint{0, 0}, PixelPoint{w, 0}, PixelPoint{w, ht},
                     PixelPoint{0, ht}};
  Quad quad;
  for (std::size_t i = 0; i < 4; ++i) {
    quad[i] = Apply(h, corners[i]) + window_origin;
  }
  if (!IsSimple(quad) || std::abs(SignedArea(quad)) < 1.0) {
    throw Error(ErrorCode::kDegenerateQuad,
                "projected frame is self-intersecting or collapsed");
  }
  return quad;
}

PixelPoint Centroid(const Quad& quad) {
  if (!IsSimple(quad)) {
    throw Error(ErrorCode::kDegenerateQuad, "quad is self-intersecting");
  }
  // Shift to the first vertex for numerical stability at large coordinates.
  const PixelPoint o = quad[0];
  double area2 = 0.0, cu = 0.0, cv = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const PixelPoint a = quad[i] - o;
    const PixelPoint b = quad[(i + 1) % 4] - o;
    const double cross = a.u * b.v - b.u * a.v;
    area2 += cross;
    cu += (a.u + b.u) * cross;
    cv += (a.v + b.v) * cross;
  }
  if (!(std::abs(area2) > 0.0)) {
    throw Error(ErrorCode::kDegenerateQuad, "quad has zero area");
  }
  return {o.u + cu / (3.0 * area2), o.v + cv / (3.0 * area2)};
}

GeoFix GeolocateFrame(std::int64_t frame_id, const MatchSet& matches,
                      int frame_width, int frame_height, const GisMask& mask,
                      const GeoTransform& transform,
                      const GeolocateOptions& options) {
  GeoFix fix;
  fix.frame_id = frame_id;
  try {
    FilterSelection selection;
    if (options.use_gis_filter) {
      selection = SelectValid(LabelMatches(matches, mask), options.filter);
    } else {
      selection = {matches.pairs, FilterBranch::kDisabled};
    }
    fix.branch = selection.branch;
    fix.n_valid_matches = selection.valid.size();
    if (selection.branch == FilterBranch::kBuildingDominant ||
        selection.branch == FilterBranch::kBuildingOnly) {
      spdlog::debug("frame {}: estimating from building matches ({})",
                    frame_id, ToString(selection.branch));
    }

    const HomographyEstimate estimate =
        RansacEstimate(selection.valid, options.ransac);
    fix.mean_reprojection_px = estimate.mean_reprojection_px;
    fix.quad = ProjectFrame(estimate.h, frame_width, frame_height,
                            matches.window_origin);
    fix.position = PixelToGps(Centroid(fix.quad), transform);
    if (!fix.position.IsValid()) {
      throw Error(ErrorCode::kDegenerateQuad, "fix outside WGS84 range");
    }
    fix.status = FixStatus::kOk;
  } catch (const std::exception& e) {
    fix.status = FixStatus::kNoFix;
    fix.position = {};
    fix.quad = {};
    fix.failure = e.what();
    spdlog::warn("frame {}: no fix ({})", frame_id, fix.failure);
  }
  return fix;
}

}  // namespace geofix
