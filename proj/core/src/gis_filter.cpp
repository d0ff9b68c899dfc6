#include "geofix/gis_filter.hpp"

#include <cmath>

#include "geofix/error.hpp"

namespace geofix {
namespace {

bool BelowRatio(std::size_t n_building, std::size_t n_ground, double ratio) {
  if (std::floor(ratio) == ratio && ratio < 1e15) {
    const auto r = static_cast<unsigned long long>(ratio);
    return static_cast<unsigned long long>(n_building) <
           r * static_cast<unsigned long long>(n_ground);
  }
  return static_cast<long double>(n_building) <
         static_cast<long double>(ratio) * static_cast<long double>(n_ground);
}

}  // namespace

void FilterConfig::Validate() const {
  if (threshold_t < 1 || !(ratio > 0.0) || !std::isfinite(ratio)) {
    throw Error(ErrorCode::kInvalidArgument,
                "filter needs threshold_t >= 1 and ratio > 0");
  }
}

std::string_view ToString(FilterBranch branch) {
  switch (branch) {
    case FilterBranch::kGroundDominant: return "ground_dominant";
    case FilterBranch::kBuildingDominant: return "building_dominant";
    case FilterBranch::kBuildingOnly: return "building_only";
    case FilterBranch::kUnion: return "union";
    case FilterBranch::kDisabled: return "disabled";
  }
  return "unknown";
}

LabeledMatchSet LabelMatches(const MatchSet& matches, const GisMask& mask) {
  LabeledMatchSet labeled;
  for (const MatchPair& pair : matches.pairs) {
    if (Classify(matches.FullBasemapPoint(pair), mask) ==
        PixelClass::kBuilding) {
      labeled.building.push_back(pair);
    } else {
      labeled.ground.push_back(pair);
    }
  }
  return labeled;
}

FilterSelection SelectValid(const LabeledMatchSet& labeled,
                            const FilterConfig& cfg) {
  cfg.Validate();
  const std::size_t n_ground = labeled.ground.size();
  const std::size_t n_building = labeled.building.size();
  const auto t = static_cast<std::size_t>(cfg.threshold_t);

  if (n_ground >= t) {
    if (BelowRatio(n_building, n_ground, cfg.ratio)) {
      return {labeled.ground, FilterBranch::kGroundDominant};
    }
    return {labeled.building, FilterBranch::kBuildingDominant};
  }
  if (n_building >= t) {
    return {labeled.building, FilterBranch::kBuildingOnly};
  }
  FilterSelection selection{labeled.ground, FilterBranch::kUnion};
  selection.valid.insert(selection.valid.end(), labeled.building.begin(),
                         labeled.building.end());
  return selection;
}

}  // namespace geofix
