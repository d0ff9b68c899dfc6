#include <gtest/gtest.h>

#include <sstream>

#include "geofix/error.hpp"
#include "geofix/footprints.hpp"

namespace geofix {
namespace {

FootprintParseResult Parse(const std::string& text, FootprintFormat format) {
  std::istringstream in(text);
  return ParseFootprints(in, format);
}

ErrorCode ParseError(const std::string& text, FootprintFormat format) {
  try {
    Parse(text, format);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kInvalidArgument;
}

constexpr const char* kSquare = R"({
  "type": "FeatureCollection",
  "features": [{
    "type": "Feature", "id": "hall",
    "properties": {"building": "yes"},
    "geometry": {"type": "Polygon", "coordinates": [[
      [-83.0, 40.0], [-82.999, 40.0], [-82.999, 39.999], [-83.0, 39.999],
      [-83.0, 40.0]]]}
  }]
})";

TEST(GeoJson, SquarePolygon) {
  const auto r = Parse(kSquare, FootprintFormat::kGeoJson);
  ASSERT_EQ(r.footprints.size(), 1u);
  EXPECT_EQ(r.skipped, 0u);
  const auto& fp = r.footprints[0];
  ASSERT_EQ(fp.outer_ring.size(), 4u);
  EXPECT_EQ(fp.tag_id, "hall");
  // GeoJSON order is [lon, lat].
  EXPECT_EQ(fp.outer_ring[1].lat, 40.0);
  EXPECT_EQ(fp.outer_ring[1].lon, -82.999);
}

TEST(GeoJson, LineStringIsSkipped) {
  const auto r = Parse(R"({"type": "FeatureCollection", "features": [
    {"type": "Feature", "geometry": {"type": "Polygon", "coordinates":
      [[[0,0],[0.001,0],[0.001,0.001],[0,0]]]}},
    {"type": "Feature", "geometry": {"type": "LineString", "coordinates":
      [[0,0],[1,1]]}}]})",
                       FootprintFormat::kGeoJson);
  EXPECT_EQ(r.footprints.size(), 1u);
  EXPECT_EQ(r.skipped, 1u);
}

TEST(GeoJson, DuplicateVerticesAndHoles) {
  const auto r = Parse(R"({"type": "Polygon", "coordinates": [
      [[0,0],[0,0],[0.01,0],[0.01,0.01],[0,0.01],[0,0]],
      [[0.004,0.004],[0.006,0.004],[0.006,0.006],[0.004,0.004]]]})",
                       FootprintFormat::kGeoJson);
  ASSERT_EQ(r.footprints.size(), 1u);
  EXPECT_EQ(r.footprints[0].outer_ring.size(), 4u);
  ASSERT_EQ(r.footprints[0].holes.size(), 1u);
  EXPECT_EQ(r.footprints[0].holes[0].size(), 3u);
}

TEST(GeoJson, MultiPolygonSplitsIntoParts) {
  const auto r = Parse(R"({"type": "Feature", "id": 7, "geometry": {
      "type": "MultiPolygon", "coordinates": [
        [[[0,0],[0.001,0],[0.001,0.001],[0,0]]],
        [[[1,1],[1.001,1],[1.001,1.001],[1,1]]]]}})",
                       FootprintFormat::kGeoJson);
  ASSERT_EQ(r.footprints.size(), 2u);
  EXPECT_NE(r.footprints[0].tag_id, r.footprints[1].tag_id);
}

TEST(GeoJson, Errors) {
  EXPECT_EQ(ParseError("{not json", FootprintFormat::kGeoJson),
            ErrorCode::kDocumentMalformed);
  EXPECT_EQ(ParseError(R"({"type": "FeatureCollection", "features": []})",
                       FootprintFormat::kGeoJson),
            ErrorCode::kNoFootprints);
  // A two-vertex ring is malformed, so nothing usable remains.
  EXPECT_EQ(ParseError(R"({"type": "Polygon", "coordinates": [[[0,0],[1,1],[0,0]]]})",
                       FootprintFormat::kGeoJson),
            ErrorCode::kNoFootprints);
}

constexpr const char* kOsmMinimal = R"(<?xml version="1.0"?>
<osm version="0.6">
  <node id="1" lat="40.000" lon="-83.000"/>
  <node id="2" lat="40.000" lon="-82.999"/>
  <node id="3" lat="39.999" lon="-82.999"/>
  <node id="4" lat="39.999" lon="-83.000"/>
  <node id="99" lat="10" lon="10"/>
  <way id="10">
    <nd ref="1"/><nd ref="2"/><nd ref="3"/><nd ref="4"/><nd ref="1"/>
    <tag k="building" v="yes"/>
  </way>
  <way id="11">
    <nd ref="1"/><nd ref="2"/><nd ref="3"/><nd ref="1"/>
    <tag k="highway" v="service"/>
  </way>
</osm>)";

TEST(OsmXml, MinimalClosedWay) {
  const auto r = Parse(kOsmMinimal, FootprintFormat::kOsmXml);
  ASSERT_EQ(r.footprints.size(), 1u);
  EXPECT_EQ(r.footprints[0].outer_ring.size(), 4u);
  EXPECT_EQ(r.footprints[0].tag_id, "way/10");
  EXPECT_EQ(r.skipped, 0u);
}

TEST(OsmXml, OpenOrDanglingBuildingWaysAreSkipped) {
  const auto r = Parse(R"(<osm>
  <node id="1" lat="40.000" lon="-83.000"/>
  <node id="2" lat="40.000" lon="-82.999"/>
  <node id="3" lat="39.999" lon="-82.999"/>
  <way id="1"><nd ref="1"/><nd ref="2"/><nd ref="3"/><nd ref="1"/>
    <tag k="building" v="house"/></way>
  <way id="2"><nd ref="1"/><nd ref="2"/><nd ref="3"/>
    <tag k="building" v="yes"/></way>
  <way id="3"><nd ref="1"/><nd ref="2"/><nd ref="77"/><nd ref="1"/>
    <tag k="building" v="yes"/></way>
  <way id="4"><nd ref="1"/><nd ref="2"/><nd ref="3"/><nd ref="1"/>
    <tag k="building" v="no"/></way>
</osm>)",
                       FootprintFormat::kOsmXml);
  EXPECT_EQ(r.footprints.size(), 1u);
  EXPECT_EQ(r.skipped, 2u);
}

TEST(OsmXml, MultipolygonWithHole) {
  const auto r = Parse(R"(<osm>
  <node id="1" lat="40.000" lon="-83.000"/>
  <node id="2" lat="40.000" lon="-82.990"/>
  <node id="3" lat="39.990" lon="-82.990"/>
  <node id="4" lat="39.990" lon="-83.000"/>
  <node id="5" lat="39.996" lon="-82.996"/>
  <node id="6" lat="39.996" lon="-82.994"/>
  <node id="7" lat="39.994" lon="-82.994"/>
  <way id="20"><nd ref="1"/><nd ref="2"/><nd ref="3"/></way>
  <way id="21"><nd ref="3"/><nd ref="4"/><nd ref="1"/></way>
  <way id="22"><nd ref="5"/><nd ref="6"/><nd ref="7"/><nd ref="5"/></way>
  <relation id="30">
    <member type="way" ref="20" role="outer"/>
    <member type="way" ref="21" role="outer"/>
    <member type="way" ref="22" role="inner"/>
    <tag k="type" v="multipolygon"/>
    <tag k="building" v="university"/>
  </relation>
</osm>)",
                       FootprintFormat::kOsmXml);
  ASSERT_EQ(r.footprints.size(), 1u);
  EXPECT_EQ(r.footprints[0].tag_id, "relation/30");
  EXPECT_EQ(r.footprints[0].outer_ring.size(), 4u);
  ASSERT_EQ(r.footprints[0].holes.size(), 1u);
  EXPECT_EQ(r.footprints[0].holes[0].size(), 3u);
}

TEST(OsmXml, Errors) {
  EXPECT_EQ(ParseError("<osm><node", FootprintFormat::kOsmXml),
            ErrorCode::kDocumentMalformed);
  EXPECT_EQ(ParseError("<gpx/>", FootprintFormat::kOsmXml),
            ErrorCode::kDocumentMalformed);
  EXPECT_EQ(ParseError("<osm><node id=\"1\" lat=\"1\" lon=\"1\"/></osm>",
                       FootprintFormat::kOsmXml),
            ErrorCode::kNoFootprints);
}

TEST(Footprints, FormatNames) {
  EXPECT_EQ(ParseFootprintFormat("geojson"), FootprintFormat::kGeoJson);
  EXPECT_EQ(ParseFootprintFormat("osm-xml"), FootprintFormat::kOsmXml);
  EXPECT_THROW(ParseFootprintFormat("shapefile"), Error);
}

TEST(Footprints, NormalizeRing) {
  const Ring r = NormalizeRing({{0, 0}, {0, 0}, {1, 0}, {1, 1}, {0, 0}, {0, 0}});
  EXPECT_EQ(r.size(), 3u);
}

}  // namespace
}  // namespace geofix
