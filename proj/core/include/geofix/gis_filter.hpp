#pragma once

#include <string_view>
#include <vector>

#include "geofix/correspondence.hpp"
#include "geofix/gis_mask.hpp"

namespace geofix {

/// Matches partitioned by the class of their full-basemap position.
struct LabeledMatchSet {
  std::vector<MatchPair> ground;
  std::vector<MatchPair> building;
};

struct FilterConfig {
  int threshold_t = 50;  // minimum class count to trust a class on its own
  double ratio = 3.0;    // building/ground ratio above which buildings win

  void Validate() const;
};

enum class FilterBranch {
  kGroundDominant,    // N_G >= T and N_B / N_G < ratio
  kBuildingDominant,  // N_G >= T and N_B / N_G >= ratio
  kBuildingOnly,      // N_G < T and N_B >= T
  kUnion,             // both below T
  kDisabled,          // filter switched off; all matches used
};

std::string_view ToString(FilterBranch branch);

LabeledMatchSet LabelMatches(const MatchSet& matches, const GisMask& mask);

struct FilterSelection {
  std::vector<MatchPair> valid;
  FilterBranch branch = FilterBranch::kUnion;
};

/// Valid-match selection for homography estimation:
///
///   if N_G >= T:
///     valid = (N_B / N_G < ratio) ? ground : building
///   elif N_B >= T:
///     valid = building
///   else:
///     valid = ground followed by building
///
/// The ratio test is evaluated as N_B < ratio * N_G, in integers when the
/// ratio is integral, so a tie at exactly `ratio` goes to buildings.
FilterSelection SelectValid(const LabeledMatchSet& labeled,
                            const FilterConfig& cfg);

}  // namespace geofix
