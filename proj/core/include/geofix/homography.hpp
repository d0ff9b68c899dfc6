#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "geofix/correspondence.hpp"
#include "geofix/geodesy.hpp"

namespace geofix {

/// 3x3 projective transform mapping frame pixels to basemap pixels.
/// Stored scale-normalized: unit Frobenius norm, h(2,2) >= 0.
class Homography {
 public:
  Homography() : Homography(Eigen::Matrix3d::Identity()) {}
  /// Throws Error(kDegenerateConfiguration) for a singular or non-finite
  /// matrix.
  explicit Homography(const Eigen::Matrix3d& m);

  static Homography Translation(double du, double dv);

  const Eigen::Matrix3d& matrix() const { return h_; }
  Homography Inverse() const;

  /// Composition: (a * b) applies b first.
  friend Homography operator*(const Homography& a, const Homography& b) {
    return Homography(a.h_ * b.h_);
  }

 private:
  Eigen::Matrix3d h_;
};

/// Throws Error(kPointAtInfinity) when |w| <= 1e-12.
PixelPoint Apply(const Homography& h, PixelPoint p);

/// Forward residual |apply(h, image_pt) - basemap_pt|; infinity when the
/// image point maps to infinity.
double ReprojectionError(const Homography& h, const MatchPair& pair);

/// Normalized DLT over >= 4 pairs (Hartley isotropic normalization of both
/// point sets, SVD null vector of the stacked 2n x 9 system).
/// Throws Error(kInsufficientMatches) for < 4 pairs and
/// Error(kDegenerateConfiguration) for collinear/coincident input.
Homography Dlt(std::span<const MatchPair> pairs);

struct RansacConfig {
  int max_iters = 2000;
  double inlier_threshold_px = 3.0;
  int min_inliers = 10;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct HomographyEstimate {
  Homography h;
  std::vector<std::size_t> inlier_indices;  // ascending
  double mean_reprojection_px = 0.0;        // over inliers
};

/// Fixed-budget 4-point RANSAC. Iteration i draws its sample from an RNG
/// stream derived from (seed, i), so the result does not depend on
/// evaluation order. The best hypothesis (most inliers, ties to lower mean
/// error) is refit by DLT on its inliers.
/// Throws Error(kInsufficientMatches) for < 4 pairs and Error(kNoConsensus)
/// when fewer than min_inliers survive.
HomographyEstimate RansacEstimate(std::span<const MatchPair> pairs,
                                  const RansacConfig& cfg);

}  // namespace geofix
