#include "geofix/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "geofix/error.hpp"

namespace geofix {

void SimFlight::Validate() const {
  if (waypoints.empty() || frame_width <= 0 || frame_height <= 0 ||
      !(step_m > 0.0) || !(scale_jitter >= 0.0 && scale_jitter <= 0.02) ||
      !(rotation_jitter_deg >= 0.0 && rotation_jitter_deg < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "flight needs waypoints, frame size > 0, step_m > 0, "
                "scale jitter <= 2%, rotation jitter < 1 deg");
  }
  for (const GeoPoint& g : waypoints) {
    if (!g.IsValid()) {
      throw Error(ErrorCode::kInvalidArgument, "invalid waypoint coordinate");
    }
  }
}

PixelPoint FrameCenter(int width, int height) {
  return {0.5 * width, 0.5 * height};
}

std::vector<SimFrame> GenerateFlight(const SimFlight& flight,
                                     const GeoTransform& t) {
  flight.Validate();
  t.Validate();
  std::vector<PixelPoint> path;
  for (const GeoPoint& g : flight.waypoints) {
    const PixelPoint p = GpsToPixel(g, t);
    if (!t.Contains(p)) {
      throw Error(ErrorCode::kWaypointOutsideBasemap,
                  "waypoint (" + std::to_string(g.lat) + ", " +
                      std::to_string(g.lon) + ") is outside the basemap");
    }
    path.push_back(p);
  }

  // Polyline samples in basemap pixels at every step_m of ground distance.
  std::vector<PixelPoint> samples{path.front()};
  const double step_px = flight.step_m / t.gsd;
  const double tolerance_px = 1e-3 / t.gsd;
  double carried = 0.0;  // distance already travelled past the last sample
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const PixelPoint a = path[i];
    const PixelPoint d = path[i + 1] - a;
    const double length = Norm(d);
    if (length == 0.0) continue;
    double s = step_px - carried;
    while (s <= length + tolerance_px) {
      const double f = std::min(s, length) / length;
      samples.push_back({a.u + f * d.u, a.v + f * d.v});
      s += step_px;
    }
    carried = length - (s - step_px);
    if (carried < 0.0) carried = 0.0;
  }

  const PixelPoint center = FrameCenter(flight.frame_width, flight.frame_height);
  std::vector<SimFrame> frames;
  frames.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::mt19937_64 rng(DeriveSeed(flight.seed, i));
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    const double scale = 1.0 + flight.scale_jitter * sym(rng);
    const double angle =
        flight.rotation_jitter_deg * sym(rng) * std::numbers::pi / 180.0;

    Eigen::Matrix3d to_origin = Eigen::Matrix3d::Identity();
    to_origin(0, 2) = -center.u;
    to_origin(1, 2) = -center.v;
    Eigen::Matrix3d rot_scale = Eigen::Matrix3d::Identity();
    rot_scale(0, 0) = scale * std::cos(angle);
    rot_scale(0, 1) = -scale * std::sin(angle);
    rot_scale(1, 0) = scale * std::sin(angle);
    rot_scale(1, 1) = scale * std::cos(angle);
    Eigen::Matrix3d to_sample = Eigen::Matrix3d::Identity();
    to_sample(0, 2) = samples[i].u;
    to_sample(1, 2) = samples[i].v;

    SimFrame frame{static_cast<std::int64_t>(i),
                   PixelToGps(samples[i], t),
                   Homography(to_sample * rot_scale * to_origin),
                   flight.frame_width,
                   flight.frame_height,
                   std::nullopt};
    frames.push_back(std::move(frame));
  }
  return frames;
}

GrayImage RenderFrame(const SimFrame& frame, const GrayImage& basemap) {
  GrayImage out(frame.width, frame.height);
  for (int v = 0; v < frame.height; ++v) {
    for (int u = 0; u < frame.width; ++u) {
      const PixelPoint p = Apply(frame.gt_h, {static_cast<double>(u),
                                              static_cast<double>(v)});
      out.at(u, v) = static_cast<std::uint8_t>(
          std::lround(std::clamp(basemap.Sample(p.u, p.v), 0.0, 255.0)));
    }
  }
  return out;
}

MatchSet EmitMatches(const SimFrame& frame, const GisMask& mask,
                     const SyntheticMatchConfig& cfg, std::uint64_t seed) {
  return SyntheticMatches(frame.gt_h, mask, frame.width, frame.height, cfg,
                          DeriveSeed(seed, static_cast<std::uint64_t>(
                                               frame.frame_id)));
}

}  // namespace geofix
