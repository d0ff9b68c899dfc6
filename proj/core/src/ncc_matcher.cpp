#include "geofix/ncc_matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geofix/error.hpp"

namespace geofix {
namespace {

std::uint64_t HashImage(const GrayImage& image) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 0x100000001b3ull;
  };
  for (int shift = 0; shift < 32; shift += 8) {
    mix((static_cast<std::uint32_t>(image.width()) >> shift) & 0xFF);
    mix((static_cast<std::uint32_t>(image.height()) >> shift) & 0xFF);
  }
  for (std::uint8_t px : image.pixels()) mix(px);
  return h;
}

// Harris response with Sobel gradients and a separable [1 4 6 4 1] window.
std::vector<float> HarrisResponse(const GrayImage& image, double k) {
  const int w = image.width();
  const int h = image.height();
  const auto idx = [w](int u, int v) {
    return static_cast<std::size_t>(v) * w + u;
  };
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<float> ixx(n, 0.0f), iyy(n, 0.0f), ixy(n, 0.0f);
  for (int v = 1; v + 1 < h; ++v) {
    for (int u = 1; u + 1 < w; ++u) {
      const auto p = [&](int du, int dv) {
        return static_cast<float>(image.at(u + du, v + dv));
      };
      const float gx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) -
                       (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
      const float gy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) -
                       (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
      ixx[idx(u, v)] = gx * gx;
      iyy[idx(u, v)] = gy * gy;
      ixy[idx(u, v)] = gx * gy;
    }
  }
  static constexpr float kTaps[5] = {1.f / 16, 4.f / 16, 6.f / 16, 4.f / 16,
                                     1.f / 16};
  auto smooth = [&](std::vector<float>& img) {
    std::vector<float> tmp(n, 0.0f);
    for (int v = 0; v < h; ++v) {
      for (int u = 2; u + 2 < w; ++u) {
        float acc = 0.0f;
        for (int t = -2; t <= 2; ++t) acc += kTaps[t + 2] * img[idx(u + t, v)];
        tmp[idx(u, v)] = acc;
      }
    }
    std::fill(img.begin(), img.end(), 0.0f);
    for (int v = 2; v + 2 < h; ++v) {
      for (int u = 0; u < w; ++u) {
        float acc = 0.0f;
        for (int t = -2; t <= 2; ++t) acc += kTaps[t + 2] * tmp[idx(u, v + t)];
        img[idx(u, v)] = acc;
      }
    }
  };
  smooth(ixx);
  smooth(iyy);
  smooth(ixy);
  std::vector<float> response(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double det = static_cast<double>(ixx[i]) * iyy[i] -
                       static_cast<double>(ixy[i]) * ixy[i];
    const double trace = static_cast<double>(ixx[i]) + iyy[i];
    response[i] = static_cast<float>(det - k * trace * trace);
  }
  return response;
}

}  // namespace

NccMatcher::NccMatcher(NccMatcherConfig cfg) : cfg_(cfg) {
  if (cfg_.patch_radius < 1 || cfg_.nms_radius < 1 ||
      cfg_.max_frame_keypoints < 1 || cfg_.max_window_keypoints < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad NCC matcher configuration");
  }
}

NccMatcher::Features NccMatcher::Extract(const GrayImage& image,
                                         int max_keypoints) const {
  Features features;
  const int margin = std::max(cfg_.patch_radius, cfg_.nms_radius) + 3;
  if (image.width() <= 2 * margin || image.height() <= 2 * margin) {
    return features;
  }
  const std::vector<float> response = HarrisResponse(image, cfg_.harris_k);
  const int w = image.width();
  const auto r_at = [&](int u, int v) {
    return response[static_cast<std::size_t>(v) * w + u];
  };
  const float peak = *std::max_element(response.begin(), response.end());
  if (!(peak > 0.0f)) return features;
  const auto floor_response =
      static_cast<float>(cfg_.relative_response_threshold * peak);

  std::vector<Keypoint> candidates;
  const int r = cfg_.nms_radius;
  for (int v = margin; v < image.height() - margin; ++v) {
    for (int u = margin; u < w - margin; ++u) {
      const float value = r_at(u, v);
      if (value <= floor_response) continue;
      bool is_max = true;
      for (int dv = -r; dv <= r && is_max; ++dv) {
        for (int du = -r; du <= r; ++du) {
          if (du == 0 && dv == 0) continue;
          const float other = r_at(u + du, v + dv);
          // Ties resolve to the first pixel in raster order.
          const bool before = dv < 0 || (dv == 0 && du < 0);
          if (other > value || (before && other == value)) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) candidates.push_back({u, v, value});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Keypoint& a, const Keypoint& b) {
                     return a.response > b.response;
                   });

  const int side = 2 * cfg_.patch_radius + 1;
  const std::size_t patch = static_cast<std::size_t>(side) * side;
  std::vector<float> desc(patch);
  for (const Keypoint& kp : candidates) {
    if (features.keypoints.size() >= static_cast<std::size_t>(max_keypoints)) {
      break;
    }
    double mean = 0.0;
    std::size_t i = 0;
    for (int dv = -cfg_.patch_radius; dv <= cfg_.patch_radius; ++dv) {
      for (int du = -cfg_.patch_radius; du <= cfg_.patch_radius; ++du) {
        desc[i] = image.at(kp.u + du, kp.v + dv);
        mean += desc[i++];
      }
    }
    mean /= static_cast<double>(patch);
    double norm = 0.0;
    for (float& d : desc) {
      d = static_cast<float>(d - mean);
      norm += static_cast<double>(d) * d;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-3) continue;  // flat patch
    for (float& d : desc) d = static_cast<float>(d / norm);
    features.keypoints.push_back(kp);
    features.descriptors.insert(features.descriptors.end(), desc.begin(),
                                desc.end());
  }
  return features;
}

std::size_t NccMatcher::cache_hits() const {
  std::lock_guard lock(cache_mutex_);
  return cache_hits_;
}

std::shared_ptr<const NccMatcher::Features> NccMatcher::WindowFeatures(
    const GrayImage& window) {
  const std::uint64_t key = HashImage(window);
  {
    std::lock_guard lock(cache_mutex_);
    for (auto it = cache_.begin(); it != cache_.end(); ++it) {
      if (it->first == key) {
        cache_.splice(cache_.begin(), cache_, it);
        ++cache_hits_;
        return cache_.front().second;
      }
    }
  }
  auto features = std::make_shared<const Features>(
      Extract(window, cfg_.max_window_keypoints));
  std::lock_guard lock(cache_mutex_);
  cache_.emplace_front(key, features);
  while (cache_.size() > cfg_.cache_capacity) cache_.pop_back();
  return features;
}

MatchSet NccMatcher::DoMatch(const FrameInput& frame,
                             const BasemapWindow& window,
                             double min_confidence) {
  if (frame.raster.empty() || window.raster == nullptr ||
      window.raster->empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "NCC backend needs frame and window rasters");
  }
  const Features frame_features =
      Extract(frame.raster, cfg_.max_frame_keypoints);
  const auto window_features = WindowFeatures(*window.raster);

  const std::size_t nf = frame_features.keypoints.size();
  const std::size_t nw = window_features->keypoints.size();
  const int side = 2 * cfg_.patch_radius + 1;
  const std::size_t patch = static_cast<std::size_t>(side) * side;

  std::vector<std::size_t> best_for_frame(nf, nw);
  std::vector<float> best_frame_score(nf, -2.0f);
  std::vector<std::size_t> best_for_window(nw, nf);
  std::vector<float> best_window_score(nw, -2.0f);
  for (std::size_t i = 0; i < nf; ++i) {
    const float* a = frame_features.descriptors.data() + i * patch;
    for (std::size_t j = 0; j < nw; ++j) {
      const float* b = window_features->descriptors.data() + j * patch;
      float score = 0.0f;
      for (std::size_t k = 0; k < patch; ++k) score += a[k] * b[k];
      if (score > best_frame_score[i]) {
        best_frame_score[i] = score;
        best_for_frame[i] = j;
      }
      if (score > best_window_score[j]) {
        best_window_score[j] = score;
        best_for_window[j] = i;
      }
    }
  }

  MatchSet out{{}, window.origin};
  for (std::size_t i = 0; i < nf; ++i) {
    const std::size_t j = best_for_frame[i];
    if (j == nw || best_for_window[j] != i) continue;
    const double confidence =
        std::clamp(static_cast<double>(best_frame_score[i]), 0.0, 1.0);
    if (confidence < min_confidence) continue;
    const Keypoint& fk = frame_features.keypoints[i];
    const Keypoint& wk = window_features->keypoints[j];
    out.pairs.push_back({{static_cast<double>(fk.u), static_cast<double>(fk.v)},
                         {static_cast<double>(wk.u), static_cast<double>(wk.v)},
                         confidence});
  }
  return out;
}

}  // namespace geofix
