#include "geofix/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <nlohmann/json.hpp>

#include "geofix/error.hpp"

namespace geofix {
namespace {

namespace pt = boost::property_tree;

std::string Unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::filesystem::path base_dir)
      : tree_(tree), base_dir_(std::move(base_dir)) {}

  bool Has(const std::string& key) const {
    return tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))
        .has_value();
  }
  bool HasSection(const std::string& section) const {
    return tree_.get_child_optional(section).has_value();
  }

  std::optional<std::string> String(const std::string& key) const {
    const auto raw =
        tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!raw) return std::nullopt;
    return Unquote(*raw);
  }

  std::string Path(const std::string& key) const {
    const auto s = String(key);
    if (!s || s->empty()) return {};
    const std::filesystem::path p(*s);
    return (p.is_absolute() ? p : base_dir_ / p).lexically_normal().string();
  }

  template <typename T>
  void Get(const std::string& key, T& out) const {
    const auto s = String(key);
    if (!s) return;
    try {
      const nlohmann::json value = nlohmann::json::parse(*s);
      out = value.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kConfigInvalid,
                  "bad value for " + key + ": '" + *s + "'");
    }
  }

  void Get(const std::string& key, std::string& out) const {
    if (const auto s = String(key)) out = *s;
  }

 private:
  const pt::ptree& tree_;
  std::filesystem::path base_dir_;
};

std::optional<GeoPoint> ReadPoint(const Reader& r, const std::string& prefix) {
  if (!r.Has(prefix + "_lat") && !r.Has(prefix + "_lon")) return std::nullopt;
  if (!r.Has(prefix + "_lat") || !r.Has(prefix + "_lon")) {
    throw Error(ErrorCode::kConfigInvalid,
                prefix + " needs both _lat and _lon");
  }
  GeoPoint g;
  r.Get(prefix + "_lat", g.lat);
  r.Get(prefix + "_lon", g.lon);
  if (!g.IsValid()) {
    throw Error(ErrorCode::kConfigInvalid, prefix + " is not a WGS84 point");
  }
  return g;
}

}  // namespace

PipelineConfig ParseConfig(std::istream& in,
                           const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  }
  const Reader r(tree, base_dir);
  PipelineConfig cfg;

  r.Get("run.sequence", cfg.sequence);

  cfg.basemap_image = r.Path("basemap.image");
  cfg.world_file = r.Path("basemap.world_file");
  r.Get("basemap.width", cfg.basemap_width);
  r.Get("basemap.height", cfg.basemap_height);
  if (cfg.world_file.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "basemap.world_file is required");
  }
  if (cfg.basemap_image.empty() &&
      (cfg.basemap_width <= 0 || cfg.basemap_height <= 0)) {
    throw Error(ErrorCode::kConfigInvalid,
                "need basemap.image or basemap.width/height");
  }

  cfg.footprints_path = r.Path("footprints.path");
  if (const auto format = r.String("footprints.format")) {
    try {
      cfg.footprints_format = ParseFootprintFormat(*format);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigInvalid, e.what());
    }
  }

  r.Get("matcher.backend", cfg.matcher.backend);
  r.Get("matcher.min_confidence", cfg.matcher.min_confidence);
  r.Get("matcher.command", cfg.matcher.command);
  r.Get("matcher.timeout_ms", cfg.matcher.timeout_ms);
  r.Get("matcher.patch_radius", cfg.matcher.ncc.patch_radius);
  r.Get("matcher.max_frame_keypoints", cfg.matcher.ncc.max_frame_keypoints);
  r.Get("matcher.max_window_keypoints", cfg.matcher.ncc.max_window_keypoints);
  if (cfg.matcher.backend != "ncc" && cfg.matcher.backend != "synthetic" &&
      cfg.matcher.backend != "external") {
    throw Error(ErrorCode::kConfigInvalid,
                "matcher.backend must be ncc, synthetic or external");
  }
  if (!(cfg.matcher.min_confidence >= 0.0 &&
        cfg.matcher.min_confidence <= 1.0)) {
    throw Error(ErrorCode::kConfigInvalid,
                "matcher.min_confidence must lie in [0, 1]");
  }
  if (cfg.matcher.backend == "external" && cfg.matcher.command.empty()) {
    throw Error(ErrorCode::kConfigInvalid,
                "matcher.command is required for the external backend");
  }

  r.Get("filter.threshold_t", cfg.filter.threshold_t);
  r.Get("filter.ratio", cfg.filter.ratio);
  r.Get("ransac.max_iters", cfg.ransac.max_iters);
  r.Get("ransac.inlier_threshold_px", cfg.ransac.inlier_threshold_px);
  r.Get("ransac.min_inliers", cfg.ransac.min_inliers);
  r.Get("ransac.seed", cfg.ransac.seed);
  try {
    cfg.filter.Validate();
    cfg.ransac.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigInvalid, e.what());
  }

  r.Get("pipeline.window_radius_px", cfg.window_radius_px);
  cfg.initial_seed = ReadPoint(r, "pipeline.initial_seed");
  if (cfg.window_radius_px < 1) {
    throw Error(ErrorCode::kConfigInvalid, "pipeline.window_radius_px < 1");
  }

  cfg.frames_list = r.Path("frames.list");

  if (r.HasSection("simulation")) {
    SimulationSettings sim;
    std::vector<std::array<double, 2>> waypoints;
    r.Get("simulation.waypoints", waypoints);
    for (const auto& [lat, lon] : waypoints) {
      sim.flight.waypoints.push_back({lat, lon});
    }
    r.Get("simulation.frame_width", sim.flight.frame_width);
    r.Get("simulation.frame_height", sim.flight.frame_height);
    r.Get("simulation.step_m", sim.flight.step_m);
    r.Get("simulation.scale_jitter", sim.flight.scale_jitter);
    r.Get("simulation.rotation_jitter_deg", sim.flight.rotation_jitter_deg);
    r.Get("simulation.seed", sim.flight.seed);
    r.Get("simulation.n_ground", sim.matches.n_ground);
    r.Get("simulation.n_building", sim.matches.n_building);
    r.Get("simulation.noise_px", sim.matches.noise_px);
    r.Get("simulation.outlier_frac", sim.matches.outlier_frac);
    r.Get("simulation.parallax_px", sim.matches.parallax_px);
    sim.match_seed = sim.flight.seed;
    r.Get("simulation.match_seed", sim.match_seed);
    r.Get("simulation.render", sim.render);
    sim.frames_dir = r.Path("simulation.frames_dir");
    try {
      sim.flight.Validate();
      sim.matches.Validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigInvalid, e.what());
    }
    cfg.simulation = std::move(sim);
  }
  if (cfg.frames_list.empty() && !cfg.simulation) {
    throw Error(ErrorCode::kConfigInvalid,
                "need frames.list or a [simulation] section");
  }
  if (cfg.matcher.backend == "synthetic" && !cfg.simulation) {
    throw Error(ErrorCode::kConfigInvalid,
                "the synthetic backend only runs simulated flights");
  }
  if (!cfg.initial_seed && cfg.simulation) {
    cfg.initial_seed = cfg.simulation->flight.waypoints.front();
  }
  if (!cfg.initial_seed) {
    throw Error(ErrorCode::kConfigInvalid,
                "pipeline.initial_seed_lat/lon is required");
  }

  cfg.output.trajectory_csv = r.Path("output.trajectory_csv");
  cfg.output.trajectory_geojson = r.Path("output.trajectory_geojson");
  cfg.output.ground_truth_csv = r.Path("output.ground_truth_csv");
  cfg.output.mask_pgm = r.Path("output.mask_pgm");
  cfg.output.mask_rle = r.Path("output.mask_rle");
  return cfg;
}

PipelineConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot open config " + path);
  return ParseConfig(in, std::filesystem::path(path).parent_path());
}

}  // namespace geofix
