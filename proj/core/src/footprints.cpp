#include "geofix/footprints.hpp"

#include <spdlog/spdlog.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <unordered_map>

#include "geofix/error.hpp"

namespace geofix {
namespace {

using nlohmann::json;
namespace pt = boost::property_tree;

// Even-odd containment in lat/lon space; only used to attach multipolygon
// holes to their outer ring.
bool RingContains(const Ring& ring, GeoPoint p) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double lon_at =
          a.lon + (p.lat - a.lat) / (b.lat - a.lat) * (b.lon - a.lon);
      if (p.lon < lon_at) inside = !inside;
    }
  }
  return inside;
}

// ---------------------------------------------------------------- GeoJSON

std::optional<Ring> JsonRing(const json& coords) {
  if (!coords.is_array()) return std::nullopt;
  Ring ring;
  ring.reserve(coords.size());
  for (const json& position : coords) {
    if (!position.is_array() || position.size() < 2 ||
        !position[0].is_number() || !position[1].is_number()) {
      return std::nullopt;
    }
    GeoPoint g{position[1].get<double>(), position[0].get<double>()};
    if (!g.IsValid()) return std::nullopt;
    ring.push_back(g);
  }
  ring = NormalizeRing(std::move(ring));
  if (ring.size() < 3) return std::nullopt;
  return ring;
}

std::optional<BuildingFootprint> JsonPolygon(const json& rings,
                                             const std::string& tag_id) {
  if (!rings.is_array() || rings.empty()) return std::nullopt;
  auto outer = JsonRing(rings[0]);
  if (!outer) return std::nullopt;
  BuildingFootprint footprint{std::move(*outer), {}, tag_id};
  for (std::size_t i = 1; i < rings.size(); ++i) {
    if (auto hole = JsonRing(rings[i])) {
      footprint.holes.push_back(std::move(*hole));
    }
  }
  return footprint;
}

std::string JsonFeatureId(const json& feature, std::size_t index) {
  if (feature.contains("id")) {
    const json& id = feature["id"];
    if (id.is_string()) return id.get<std::string>();
    if (id.is_number()) return id.dump();
  }
  return "feature/" + std::to_string(index);
}

void AddJsonGeometry(const json& geometry, const std::string& tag_id,
                     FootprintParseResult& result) {
  if (!geometry.is_object() || !geometry.contains("type") ||
      !geometry.contains("coordinates")) {
    ++result.skipped;
    return;
  }
  const std::string type = geometry["type"].get<std::string>();
  const json& coords = geometry["coordinates"];
  if (type == "Polygon") {
    if (auto fp = JsonPolygon(coords, tag_id)) {
      result.footprints.push_back(std::move(*fp));
    } else {
      ++result.skipped;
    }
  } else if (type == "MultiPolygon" && coords.is_array()) {
    std::size_t part = 0;
    for (const json& polygon : coords) {
      if (auto fp = JsonPolygon(polygon, tag_id + "#" + std::to_string(part))) {
        result.footprints.push_back(std::move(*fp));
      } else {
        ++result.skipped;
      }
      ++part;
    }
  } else {
    ++result.skipped;
  }
}

FootprintParseResult ParseGeoJson(std::istream& source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kDocumentMalformed,
                std::string("GeoJSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
    throw Error(ErrorCode::kDocumentMalformed, "GeoJSON object without type");
  }

  FootprintParseResult result;
  const std::string type = doc["type"].get<std::string>();
  try {
    if (type == "FeatureCollection") {
      if (!doc.contains("features") || !doc["features"].is_array()) {
        throw Error(ErrorCode::kDocumentMalformed,
                    "FeatureCollection without features array");
      }
      std::size_t index = 0;
      for (const json& feature : doc["features"]) {
        if (feature.is_object() && feature.contains("geometry")) {
          AddJsonGeometry(feature["geometry"], JsonFeatureId(feature, index),
                          result);
        } else {
          ++result.skipped;
        }
        ++index;
      }
    } else if (type == "Feature") {
      AddJsonGeometry(doc.value("geometry", json()), JsonFeatureId(doc, 0),
                      result);
    } else {
      AddJsonGeometry(doc, "feature/0", result);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kDocumentMalformed,
                std::string("GeoJSON structure error: ") + e.what());
  }
  return result;
}

// ---------------------------------------------------------------- OSM XML

struct OsmWay {
  std::vector<long long> refs;
  bool building = false;
};

bool IsBuildingTag(const pt::ptree& element) {
  for (const auto& [name, child] : element) {
    if (name != "tag") continue;
    const auto k = child.get_optional<std::string>("<xmlattr>.k");
    const auto v = child.get_optional<std::string>("<xmlattr>.v");
    if (k && *k == "building" && v && *v != "no") return true;
  }
  return false;
}

std::optional<std::string> TagValue(const pt::ptree& element,
                                    const std::string& key) {
  for (const auto& [name, child] : element) {
    if (name != "tag") continue;
    if (child.get<std::string>("<xmlattr>.k", "") == key) {
      return child.get<std::string>("<xmlattr>.v", "");
    }
  }
  return std::nullopt;
}

std::optional<Ring> RefsToRing(const std::vector<long long>& refs,
                               const std::unordered_map<long long, GeoPoint>&
                                   nodes) {
  Ring ring;
  ring.reserve(refs.size());
  for (long long ref : refs) {
    const auto it = nodes.find(ref);
    if (it == nodes.end()) return std::nullopt;
    ring.push_back(it->second);
  }
  ring = NormalizeRing(std::move(ring));
  if (ring.size() < 3) return std::nullopt;
  return ring;
}

// Joins open way segments end to end into closed node sequences. Returns
// nullopt if any segment cannot be closed.
std::optional<std::vector<std::vector<long long>>> AssembleRings(
    std::deque<std::vector<long long>> segments) {
  std::vector<std::vector<long long>> rings;
  while (!segments.empty()) {
    std::vector<long long> current = std::move(segments.front());
    segments.pop_front();
    if (current.empty()) continue;
    while (current.size() < 2 || current.front() != current.back()) {
      bool extended = false;
      for (auto it = segments.begin(); it != segments.end(); ++it) {
        if (it->empty()) continue;
        if (it->front() == current.back()) {
          current.insert(current.end(), it->begin() + 1, it->end());
        } else if (it->back() == current.back()) {
          current.insert(current.end(), it->rbegin() + 1, it->rend());
        } else {
          continue;
        }
        segments.erase(it);
        extended = true;
        break;
      }
      if (!extended) return std::nullopt;
    }
    rings.push_back(std::move(current));
  }
  return rings;
}

FootprintParseResult ParseOsmXml(std::istream& source) {
  pt::ptree doc;
  try {
    pt::read_xml(source, doc);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kDocumentMalformed,
                std::string("OSM XML parse error: ") + e.what());
  }
  const auto osm = doc.get_child_optional("osm");
  if (!osm) {
    throw Error(ErrorCode::kDocumentMalformed, "missing <osm> root element");
  }

  FootprintParseResult result;
  std::unordered_map<long long, GeoPoint> nodes;
  std::unordered_map<long long, OsmWay> ways;

  for (const auto& [name, element] : *osm) {
    try {
      if (name == "node") {
        const GeoPoint g{element.get<double>("<xmlattr>.lat"),
                         element.get<double>("<xmlattr>.lon")};
        if (g.IsValid()) nodes[element.get<long long>("<xmlattr>.id")] = g;
      } else if (name == "way") {
        OsmWay way;
        for (const auto& [child_name, child] : element) {
          if (child_name == "nd") {
            way.refs.push_back(child.get<long long>("<xmlattr>.ref"));
          }
        }
        way.building = IsBuildingTag(element);
        ways[element.get<long long>("<xmlattr>.id")] = std::move(way);
      }
    } catch (const pt::ptree_error&) {
      // Element without usable id/coordinates; it cannot be referenced.
    }
  }

  for (const auto& [name, element] : *osm) {
    if (name == "way") {
      const auto id = element.get_optional<long long>("<xmlattr>.id");
      if (!id) continue;
      const OsmWay& way = ways.at(*id);
      if (!way.building) continue;
      const bool closed = way.refs.size() >= 4 &&
                          way.refs.front() == way.refs.back();
      auto ring = closed ? RefsToRing(way.refs, nodes) : std::nullopt;
      if (!ring) {
        ++result.skipped;
        continue;
      }
      result.footprints.push_back(
          {std::move(*ring), {}, "way/" + std::to_string(*id)});
    } else if (name == "relation") {
      if (TagValue(element, "type") != "multipolygon" ||
          !IsBuildingTag(element)) {
        continue;
      }
      const std::string rel_id =
          "relation/" + element.get<std::string>("<xmlattr>.id", "?");
      std::deque<std::vector<long long>> outer_segments;
      std::deque<std::vector<long long>> inner_segments;
      bool missing_way = false;
      for (const auto& [child_name, member] : element) {
        if (child_name != "member" ||
            member.get<std::string>("<xmlattr>.type", "") != "way") {
          continue;
        }
        const auto ref = member.get_optional<long long>("<xmlattr>.ref");
        const auto way = ref ? ways.find(*ref) : ways.end();
        if (way == ways.end()) {
          missing_way = true;
          continue;
        }
        const std::string role = member.get<std::string>("<xmlattr>.role", "");
        (role == "inner" ? inner_segments : outer_segments)
            .push_back(way->second.refs);
      }
      auto outer_refs = AssembleRings(std::move(outer_segments));
      auto inner_refs = AssembleRings(std::move(inner_segments));
      if (missing_way || !outer_refs || !inner_refs || outer_refs->empty()) {
        ++result.skipped;
        continue;
      }
      std::vector<BuildingFootprint> parts;
      bool bad_ring = false;
      for (const auto& refs : *outer_refs) {
        auto ring = RefsToRing(refs, nodes);
        if (!ring) {
          bad_ring = true;
          break;
        }
        parts.push_back({std::move(*ring), {},
                         rel_id + "#" + std::to_string(parts.size())});
      }
      if (bad_ring) {
        ++result.skipped;
        continue;
      }
      for (const auto& refs : *inner_refs) {
        auto hole = RefsToRing(refs, nodes);
        if (!hole) continue;
        for (auto& part : parts) {
          if (RingContains(part.outer_ring, hole->front())) {
            part.holes.push_back(std::move(*hole));
            break;
          }
        }
      }
      if (parts.size() == 1) parts.front().tag_id = rel_id;
      for (auto& part : parts) result.footprints.push_back(std::move(part));
    }
  }
  return result;
}

}  // namespace

FootprintFormat ParseFootprintFormat(const std::string& name) {
  if (name == "geojson") return FootprintFormat::kGeoJson;
  if (name == "osm-xml" || name == "osm") return FootprintFormat::kOsmXml;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown footprint format '" + name +
                  "' (expected geojson or osm-xml)");
}

Ring NormalizeRing(Ring ring) {
  Ring out;
  out.reserve(ring.size());
  for (const GeoPoint& g : ring) {
    if (out.empty() || !(out.back() == g)) out.push_back(g);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

FootprintParseResult ParseFootprints(std::istream& source,
                                     FootprintFormat format) {
  FootprintParseResult result = format == FootprintFormat::kGeoJson
                                    ? ParseGeoJson(source)
                                    : ParseOsmXml(source);
  if (result.skipped > 0) {
    spdlog::warn("skipped {} malformed or non-polygon footprint feature(s)",
                 result.skipped);
  }
  if (result.footprints.empty()) {
    throw Error(ErrorCode::kNoFootprints,
                "document parsed but contains no building footprint");
  }
  return result;
}

FootprintParseResult ParseFootprintsFile(const std::string& path,
                                         FootprintFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return ParseFootprints(in, format);
}

}  // namespace geofix
