#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "geofix/footprints.hpp"
#include "geofix/geopositioning.hpp"
#include "geofix/matching.hpp"
#include "geofix/ncc_matcher.hpp"
#include "geofix/simulator.hpp"

namespace geofix {

struct MatcherSettings {
  std::string backend = "ncc";  // ncc | synthetic | external
  double min_confidence = 0.2;
  std::string command;          // external backend
  int timeout_ms = 120000;
  NccMatcherConfig ncc;
};

struct SimulationSettings {
  SimFlight flight;
  SyntheticMatchConfig matches;
  std::uint64_t match_seed = 0;
  bool render = false;     // warp basemap crops into frame rasters
  std::string frames_dir;  // where `simulate` writes rendered frames
};

struct OutputSettings {
  std::string trajectory_csv;
  std::string trajectory_geojson;
  std::string ground_truth_csv;
  std::string mask_pgm;
  std::string mask_rle;
};

/// Everything a run needs. Relative paths are resolved against the
/// directory of the config file.
struct PipelineConfig {
  std::string sequence;

  std::string basemap_image;  // .pgm/.png, optional for match-level runs
  std::string world_file;
  int basemap_width = 0;      // only when basemap_image is empty
  int basemap_height = 0;

  std::string footprints_path;  // optional: all-ground mask when empty
  FootprintFormat footprints_format = FootprintFormat::kGeoJson;

  MatcherSettings matcher;
  FilterConfig filter;
  RansacConfig ransac;

  int window_radius_px = 768;
  std::optional<GeoPoint> initial_seed;

  std::string frames_list;  // CSV: frame_id,path[,prior_lat,prior_lon]
  std::optional<SimulationSettings> simulation;

  OutputSettings output;
};

/// Reads the TOML-style key/value file ([section] headers, key = value,
/// '#' comments). Throws Error(kConfigInvalid) with the offending key.
PipelineConfig ParseConfig(std::istream& in,
                           const std::filesystem::path& base_dir);
PipelineConfig LoadConfig(const std::string& path);

}  // namespace geofix
