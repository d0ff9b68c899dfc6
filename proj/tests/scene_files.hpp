#pragma once

// Writes a small simulated campus to disk: world file, GeoJSON footprints
// and a pipeline config driving the synthetic backend.

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "test_support.hpp"

namespace geofix::testing {

inline std::filesystem::path FreshDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("geofix-test-" + name + "-" +
                    std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void WriteSceneFiles(const std::filesystem::path& dir,
                            const GeoTransform& t) {
  std::ofstream world(dir / "campus.wld");
  WriteWorldFile(world, t);
  nlohmann::json features = nlohmann::json::array();
  for (const auto& fp : BuildingGrid(t)) {
    nlohmann::json ring = nlohmann::json::array();
    for (const GeoPoint& g : fp.outer_ring) ring.push_back({g.lon, g.lat});
    ring.push_back(ring.front());
    features.push_back({{"type", "Feature"},
                        {"properties", {{"building", "yes"}}},
                        {"geometry",
                         {{"type", "Polygon"},
                          {"coordinates", nlohmann::json::array({ring})}}}});
  }
  std::ofstream(dir / "footprints.geojson")
      << nlohmann::json{{"type", "FeatureCollection"}, {"features", features}}
             .dump();
}

/// Config text for an 11-frame eastward flight over the scene.
inline std::string SceneConfig(const GeoTransform& t,
                               const std::string& extra_simulation = "",
                               const std::string& outputs = "") {
  const GeoPoint a = PixelToGps({900, 1000}, t);
  const GeoPoint b = PixelToGps({1000, 1000}, t);
  char waypoints[256];
  std::snprintf(waypoints, sizeof waypoints,
                "[[%.12f, %.12f], [%.12f, %.12f]]", a.lat, a.lon, b.lat, b.lon);
  return std::string("[run]\nsequence = \"campus\"\n\n") +
         "[basemap]\nworld_file = campus.wld\nwidth = " +
         std::to_string(t.width) + "\nheight = " + std::to_string(t.height) +
         "\n\n[footprints]\npath = footprints.geojson\nformat = geojson\n\n"
         "[matcher]\nbackend = synthetic\nmin_confidence = 0.2\n\n"
         "[simulation]\nwaypoints = " +
         waypoints + "\nstep_m = 3.0\nseed = 7\n" + extra_simulation +
         "\n[output]\n" + outputs;
}

}  // namespace geofix::testing
