#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "geofix/correspondence.hpp"
#include "geofix/gis_mask.hpp"
#include "geofix/homography.hpp"
#include "geofix/raster.hpp"

namespace geofix {

/// One UAS frame as seen by the pipeline. The raster may be empty when a
/// backend works from ground truth alone (synthetic matches).
struct FrameInput {
  std::int64_t frame_id = 0;
  int width = 0;
  int height = 0;
  GrayImage raster;
  std::optional<Homography> gt_h;  // frame -> full basemap, simulator only
  std::optional<GeoPoint> prior;   // used by --independent-windows
};

/// Region of the basemap searched for one frame.
struct BasemapWindow {
  PixelPoint origin;  // integer-valued, full-basemap pixels
  int width = 0;
  int height = 0;
  const GrayImage* raster = nullptr;  // window crop, may be null
};

/// Common interface of the correspondence backends.
///
/// Match() checks the common pre/postconditions and delegates to DoMatch():
/// every returned pair has confidence >= min_confidence, image_pt inside the
/// frame and basemap_pt inside the window, and window_origin is set from
/// the window.
class Matcher {
 public:
  virtual ~Matcher() = default;

  virtual std::string_view name() const = 0;
  virtual bool deterministic() const = 0;
  /// True when concurrent Match() calls are not allowed.
  virtual bool single_flight() const = 0;

  /// Throws Error(kInvalidArgument) for a confidence outside [0, 1] or empty
  /// frame/window, Error(kBackendUnavailable) and Error(kMatchFailed) from
  /// the backend.
  MatchSet Match(const FrameInput& frame, const BasemapWindow& window,
                 double min_confidence);

 protected:
  virtual MatchSet DoMatch(const FrameInput& frame,
                           const BasemapWindow& window,
                           double min_confidence) = 0;
};

struct SyntheticMatchConfig {
  int n_ground = 100;
  int n_building = 0;
  double noise_px = 0.0;      // per-axis Gaussian sigma on basemap points
  double outlier_frac = 0.0;  // [0, 1)
  double parallax_px = 0.0;   // displacement of building points

  void Validate() const;
};

/// Generates correspondences from a known frame -> basemap homography.
///
/// Points are drawn on distinct basemap pixels of the requested class inside
/// the projected frame (jittered within the pixel), mapped back into the
/// frame with gt_h^-1, then the basemap side receives N(0, noise^2) noise.
/// All building points of one call share a displacement of parallax_px in a
/// single uniformly drawn direction, so they behave like a second, offset
/// plane. Finally round(outlier_frac * n) pairs are replaced by uniform
/// random correspondences. The result is shuffled and uses window origin
/// (0, 0), i.e. full-basemap coordinates.
///
/// Throws Error(kInsufficientClassPixels) when the frame footprint holds
/// fewer distinct pixels of a class than requested.
MatchSet SyntheticMatches(const Homography& gt_h, const GisMask& mask,
                          int frame_width, int frame_height,
                          const SyntheticMatchConfig& cfg,
                          std::uint64_t seed);

/// Backend that ignores pixels and emits SyntheticMatches() for frames that
/// carry a ground-truth homography. The stream for a frame depends only on
/// (seed, frame_id), never on the window.
class SyntheticMatcher final : public Matcher {
 public:
  SyntheticMatcher(std::shared_ptr<const GisMask> mask,
                   SyntheticMatchConfig cfg, std::uint64_t seed);

  std::string_view name() const override { return "synthetic"; }
  bool deterministic() const override { return true; }
  bool single_flight() const override { return false; }

 protected:
  MatchSet DoMatch(const FrameInput& frame, const BasemapWindow& window,
                   double min_confidence) override;

 private:
  std::shared_ptr<const GisMask> mask_;
  SyntheticMatchConfig cfg_;
  std::uint64_t seed_;
};

/// Mixes a base seed with a stream index (frame id, iteration, ...).
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace geofix
