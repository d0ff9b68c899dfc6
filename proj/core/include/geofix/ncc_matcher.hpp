#pragma once

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "geofix/matching.hpp"

namespace geofix {

struct NccMatcherConfig {
  int patch_radius = 7;  // descriptor patch is (2r+1)^2
  int nms_radius = 3;
  double harris_k = 0.04;
  double relative_response_threshold = 0.01;  // of the strongest response
  int max_frame_keypoints = 600;
  int max_window_keypoints = 2500;
  std::size_t cache_capacity = 8;  // windows kept in the feature cache
};

/// Harris corners + normalized cross-correlation of fixed patches, with a
/// mutual-best-match check. Not rotation or scale invariant; it relies on
/// north-up frames at roughly basemap resolution. Confidence is the NCC
/// score clamped to [0, 1].
class NccMatcher final : public Matcher {
 public:
  struct Keypoint {
    int u = 0;
    int v = 0;
    float response = 0.0f;
  };
  struct Features {
    std::vector<Keypoint> keypoints;
    std::vector<float> descriptors;  // keypoints.size() x patch_size, unit norm
  };

  explicit NccMatcher(NccMatcherConfig cfg = {});

  std::string_view name() const override { return "ncc"; }
  bool deterministic() const override { return true; }
  bool single_flight() const override { return false; }

  Features Extract(const GrayImage& image, int max_keypoints) const;

  std::size_t cache_hits() const;

 protected:
  MatchSet DoMatch(const FrameInput& frame, const BasemapWindow& window,
                   double min_confidence) override;

 private:
  std::shared_ptr<const Features> WindowFeatures(const GrayImage& window);

  NccMatcherConfig cfg_;
  mutable std::mutex cache_mutex_;
  std::list<std::pair<std::uint64_t, std::shared_ptr<const Features>>> cache_;
  std::size_t cache_hits_ = 0;
};

}  // namespace geofix
