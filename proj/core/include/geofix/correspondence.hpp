#pragma once

#include <vector>

#include "geofix/geodesy.hpp"

namespace geofix {

/// One frame <-> basemap keypoint correspondence. basemap_pt is relative to
/// the searched window; see MatchSet::window_origin.
struct MatchPair {
  PixelPoint image_pt;
  PixelPoint basemap_pt;
  double confidence = 1.0;  // [0, 1]

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchSet {
  std::vector<MatchPair> pairs;
  PixelPoint window_origin;  // window (0,0) in full-basemap pixels

  PixelPoint FullBasemapPoint(const MatchPair& pair) const {
    return pair.basemap_pt + window_origin;
  }

  /// Same correspondences expressed against a window at `origin`.
  MatchSet Rebased(PixelPoint origin) const;
};

inline MatchSet MatchSet::Rebased(PixelPoint origin) const {
  MatchSet out{pairs, origin};
  const PixelPoint shift = window_origin - origin;
  for (MatchPair& p : out.pairs) p.basemap_pt = p.basemap_pt + shift;
  return out;
}

}  // namespace geofix
