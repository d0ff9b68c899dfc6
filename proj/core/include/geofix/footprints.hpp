#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "geofix/geodesy.hpp"

namespace geofix {

using Ring = std::vector<GeoPoint>;

/// One building polygon. Rings are implicitly closed (the first vertex is not
/// repeated) and carry no consecutive duplicates. Self-intersection is not
/// ruled out; OSM data is dirty.
struct BuildingFootprint {
  Ring outer_ring;
  std::vector<Ring> holes;
  std::string tag_id;
};

enum class FootprintFormat { kOsmXml, kGeoJson };

FootprintFormat ParseFootprintFormat(const std::string& name);

struct FootprintParseResult {
  std::vector<BuildingFootprint> footprints;
  std::size_t skipped = 0;  // malformed or non-polygon features
};

/// Throws Error(kDocumentMalformed) if the stream cannot be parsed at all and
/// Error(kNoFootprints) if it parses but yields no building.
FootprintParseResult ParseFootprints(std::istream& source,
                                     FootprintFormat format);
FootprintParseResult ParseFootprintsFile(const std::string& path,
                                         FootprintFormat format);

/// Drops consecutive duplicates and a closing vertex equal to the first one.
Ring NormalizeRing(Ring ring);

}  // namespace geofix
