#include "geofix/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "geofix/error.hpp"

namespace geofix {

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (stream * 0xD6E8FEB86659FD93ull);
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

MatchSet Matcher::Match(const FrameInput& frame, const BasemapWindow& window,
                        double min_confidence) {
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "min_confidence must lie in [0, 1]");
  }
  if (frame.width <= 0 || frame.height <= 0 || window.width <= 0 ||
      window.height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty frame or window");
  }
  MatchSet raw = DoMatch(frame, window, min_confidence);
  MatchSet out{{}, window.origin};
  const MatchSet rebased = raw.Rebased(window.origin);
  for (const MatchPair& p : rebased.pairs) {
    const bool image_in = p.image_pt.u >= -0.5 && p.image_pt.v >= -0.5 &&
                          p.image_pt.u < frame.width - 0.5 &&
                          p.image_pt.v < frame.height - 0.5;
    const bool map_in = p.basemap_pt.u >= -0.5 && p.basemap_pt.v >= -0.5 &&
                        p.basemap_pt.u < window.width - 0.5 &&
                        p.basemap_pt.v < window.height - 0.5;
    if (image_in && map_in && p.confidence >= min_confidence &&
        p.confidence <= 1.0) {
      out.pairs.push_back(p);
    }
  }
  return out;
}

void SyntheticMatchConfig::Validate() const {
  if (n_ground < 0 || n_building < 0 || !(noise_px >= 0.0) ||
      !(outlier_frac >= 0.0 && outlier_frac < 1.0) || !(parallax_px >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic matches need counts >= 0, noise >= 0, "
                "0 <= outlier_frac < 1, parallax >= 0");
  }
}

MatchSet SyntheticMatches(const Homography& gt_h, const GisMask& mask,
                          int frame_width, int frame_height,
                          const SyntheticMatchConfig& cfg,
                          std::uint64_t seed) {
  cfg.Validate();
  if (frame_width <= 0 || frame_height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty frame");
  }
  const Homography inverse = gt_h.Inverse();
  const double w = frame_width;
  const double h = frame_height;

  double u_min = INFINITY, v_min = INFINITY, u_max = -INFINITY,
         v_max = -INFINITY;
  for (const PixelPoint corner :
       {PixelPoint{0, 0}, PixelPoint{w, 0}, PixelPoint{w, h},
        PixelPoint{0, h}}) {
    const PixelPoint p = Apply(gt_h, corner);
    u_min = std::min(u_min, p.u);
    v_min = std::min(v_min, p.v);
    u_max = std::max(u_max, p.u);
    v_max = std::max(v_max, p.v);
  }

  // Distinct candidate pixels per class whose centers project well inside
  // the frame, leaving room for the sub-pixel jitter.
  std::vector<PixelPoint> ground_px, building_px;
  const int col_begin = std::max(0, static_cast<int>(std::ceil(u_min)));
  const int col_end =
      std::min(mask.width() - 1, static_cast<int>(std::floor(u_max)));
  const int row_begin = std::max(0, static_cast<int>(std::ceil(v_min)));
  const int row_end =
      std::min(mask.height() - 1, static_cast<int>(std::floor(v_max)));
  for (int row = row_begin; row <= row_end; ++row) {
    for (int col = col_begin; col <= col_end; ++col) {
      const PixelPoint center{static_cast<double>(col),
                              static_cast<double>(row)};
      const PixelPoint img = Apply(inverse, center);
      if (img.u < 1.0 || img.v < 1.0 || img.u > w - 2.0 || img.v > h - 2.0) {
        continue;
      }
      (mask.at(col, row) == PixelClass::kBuilding ? building_px : ground_px)
          .push_back(center);
    }
  }
  if (ground_px.size() < static_cast<std::size_t>(cfg.n_ground) ||
      building_px.size() < static_cast<std::size_t>(cfg.n_building)) {
    throw Error(ErrorCode::kInsufficientClassPixels,
                "frame footprint has " + std::to_string(ground_px.size()) +
                    " ground / " + std::to_string(building_px.size()) +
                    " building pixels, requested " +
                    std::to_string(cfg.n_ground) + " / " +
                    std::to_string(cfg.n_building));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  const double parallax_angle = 2.0 * std::numbers::pi * unit(rng);
  const PixelPoint parallax{cfg.parallax_px * std::cos(parallax_angle),
                            cfg.parallax_px * std::sin(parallax_angle)};

  MatchSet out;
  auto emit = [&](std::vector<PixelPoint>& candidates, int count,
                  bool building) {
    for (int k = 0; k < count; ++k) {
      // Partial Fisher-Yates: candidates[0, k) hold the chosen pixels.
      std::uniform_int_distribution<std::size_t> pick(k, candidates.size() - 1);
      std::swap(candidates[k], candidates[pick(rng)]);
      const PixelPoint truth{candidates[k].u + unit(rng) - 0.5,
                             candidates[k].v + unit(rng) - 0.5};
      MatchPair pair;
      pair.image_pt = Apply(inverse, truth);
      pair.basemap_pt = truth;
      if (cfg.noise_px > 0.0) {
        pair.basemap_pt.u += cfg.noise_px * noise(rng);
        pair.basemap_pt.v += cfg.noise_px * noise(rng);
      }
      if (building) pair.basemap_pt = pair.basemap_pt + parallax;
      pair.confidence = 0.6 + 0.4 * unit(rng);
      out.pairs.push_back(pair);
    }
  };
  emit(ground_px, cfg.n_ground, false);
  emit(building_px, cfg.n_building, true);

  std::shuffle(out.pairs.begin(), out.pairs.end(), rng);

  const auto n_outliers = static_cast<std::size_t>(
      std::lround(cfg.outlier_frac * static_cast<double>(out.pairs.size())));
  for (std::size_t i = 0; i < n_outliers; ++i) {
    MatchPair& pair = out.pairs[i];
    pair.image_pt = {unit(rng) * (w - 1.0), unit(rng) * (h - 1.0)};
    pair.basemap_pt = {u_min + unit(rng) * (u_max - u_min),
                       v_min + unit(rng) * (v_max - v_min)};
    pair.confidence = unit(rng);
  }
  // Outliers occupy the first slots; shuffle again so position carries no
  // information.
  std::shuffle(out.pairs.begin(), out.pairs.end(), rng);
  return out;
}

SyntheticMatcher::SyntheticMatcher(std::shared_ptr<const GisMask> mask,
                                   SyntheticMatchConfig cfg,
                                   std::uint64_t seed)
    : mask_(std::move(mask)), cfg_(cfg), seed_(seed) {
  if (!mask_) throw Error(ErrorCode::kInvalidArgument, "null mask");
  cfg_.Validate();
}

MatchSet SyntheticMatcher::DoMatch(const FrameInput& frame,
                                   const BasemapWindow& /*window*/,
                                   double /*min_confidence*/) {
  if (!frame.gt_h) {
    throw Error(ErrorCode::kMatchFailed,
                "synthetic backend needs a ground-truth homography");
  }
  return SyntheticMatches(
      *frame.gt_h, *mask_, frame.width, frame.height, cfg_,
      DeriveSeed(seed_, static_cast<std::uint64_t>(frame.frame_id)));
}

}  // namespace geofix
