#include "geofix/trajectory_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <vector>

#include "geofix/error.hpp"

namespace geofix {
namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T ParseField(const std::string& text, const char* what, std::size_t line_no) {
  std::istringstream in(text);
  T value{};
  if (!(in >> value) || !(in >> std::ws).eof()) {
    throw Error(ErrorCode::kDocumentMalformed,
                fmt::format("line {}: bad {} '{}'", line_no, what, text));
  }
  return value;
}

FilterBranch ParseBranch(const std::string& text, std::size_t line_no) {
  for (FilterBranch b :
       {FilterBranch::kGroundDominant, FilterBranch::kBuildingDominant,
        FilterBranch::kBuildingOnly, FilterBranch::kUnion,
        FilterBranch::kDisabled}) {
    if (ToString(b) == text) return b;
  }
  throw Error(ErrorCode::kDocumentMalformed,
              fmt::format("line {}: unknown branch '{}'", line_no, text));
}

bool ReadDataLine(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

}  // namespace

void WriteTrajectoryCsv(std::ostream& out, const Trajectory& trajectory) {
  out << "frame_id,status,lat,lon,branch,n_valid,mean_reproj_px\n";
  for (const GeoFix& fix : trajectory.fixes) {
    if (fix.status == FixStatus::kOk) {
      out << fmt::format("{},{},{:.9f},{:.9f},{},{},{:.6f}\n", fix.frame_id,
                         ToString(fix.status), fix.position.lat,
                         fix.position.lon, ToString(fix.branch),
                         fix.n_valid_matches, fix.mean_reprojection_px);
    } else {
      out << fmt::format("{},{},,,{},{},\n", fix.frame_id,
                         ToString(fix.status), ToString(fix.branch),
                         fix.n_valid_matches);
    }
  }
}

Trajectory ReadTrajectoryCsv(std::istream& in) {
  Trajectory trajectory;
  std::string line;
  std::size_t line_no = 0;
  if (!ReadDataLine(in, line, line_no) ||
      line.rfind("frame_id,status", 0) != 0) {
    throw Error(ErrorCode::kDocumentMalformed, "missing trajectory header");
  }
  while (ReadDataLine(in, line, line_no)) {
    const auto f = SplitCsv(line);
    if (f.size() != 7) {
      throw Error(ErrorCode::kDocumentMalformed,
                  fmt::format("line {}: expected 7 fields", line_no));
    }
    GeoFix fix;
    fix.frame_id = ParseField<std::int64_t>(f[0], "frame_id", line_no);
    if (f[1] == "ok") {
      fix.status = FixStatus::kOk;
      fix.position = {ParseField<double>(f[2], "lat", line_no),
                      ParseField<double>(f[3], "lon", line_no)};
      fix.mean_reprojection_px =
          ParseField<double>(f[6], "mean_reproj_px", line_no);
    } else if (f[1] == "nofix") {
      fix.status = FixStatus::kNoFix;
    } else {
      throw Error(ErrorCode::kDocumentMalformed,
                  fmt::format("line {}: bad status '{}'", line_no, f[1]));
    }
    fix.branch = ParseBranch(f[4], line_no);
    fix.n_valid_matches = ParseField<std::size_t>(f[5], "n_valid", line_no);
    if (!trajectory.fixes.empty() &&
        fix.frame_id <= trajectory.fixes.back().frame_id) {
      throw Error(ErrorCode::kDocumentMalformed,
                  fmt::format("line {}: frame ids must increase", line_no));
    }
    trajectory.fixes.push_back(fix);
  }
  return trajectory;
}

void WriteTrajectoryGeoJson(std::ostream& out, const Trajectory& trajectory) {
  using nlohmann::json;
  json line_coords = json::array();
  json features = json::array();
  json points = json::array();
  for (const GeoFix& fix : trajectory.fixes) {
    if (fix.status != FixStatus::kOk) continue;
    const json position = {fix.position.lon, fix.position.lat};
    line_coords.push_back(position);
    points.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "Point"}, {"coordinates", position}}},
         {"properties",
          {{"frame_id", fix.frame_id},
           {"branch", ToString(fix.branch)},
           {"n_valid", fix.n_valid_matches},
           {"mean_reproj_px", fix.mean_reprojection_px}}}});
  }
  features.push_back(
      {{"type", "Feature"},
       {"geometry", {{"type", "LineString"}, {"coordinates", line_coords}}},
       {"properties", {{"kind", "trajectory"}}}});
  for (json& p : points) features.push_back(std::move(p));
  const json doc = {{"type", "FeatureCollection"}, {"features", features}};
  out << doc.dump(1) << '\n';
}

void WriteGroundTruthCsv(std::ostream& out, const GroundTruth& gt) {
  out << "frame_id,lat,lon\n";
  for (const auto& [id, g] : gt) {
    out << fmt::format("{},{:.9f},{:.9f}\n", id, g.lat, g.lon);
  }
}

GroundTruth ReadGroundTruthCsv(std::istream& in) {
  GroundTruth gt;
  std::string line;
  std::size_t line_no = 0;
  if (!ReadDataLine(in, line, line_no) || line.rfind("frame_id", 0) != 0) {
    throw Error(ErrorCode::kDocumentMalformed, "missing ground truth header");
  }
  while (ReadDataLine(in, line, line_no)) {
    const auto f = SplitCsv(line);
    if (f.size() < 3) {
      throw Error(ErrorCode::kDocumentMalformed,
                  fmt::format("line {}: expected frame_id,lat,lon", line_no));
    }
    gt[ParseField<std::int64_t>(f[0], "frame_id", line_no)] = {
        ParseField<double>(f[1], "lat", line_no),
        ParseField<double>(f[2], "lon", line_no)};
  }
  return gt;
}

void WritePlotData(std::ostream& out, const Trajectory& predicted,
                   const GroundTruth& gt) {
  out << "series,frame_id,lat,lon,error_m\n";
  for (const auto& [id, g] : gt) {
    out << fmt::format("gt,{},{:.9f},{:.9f},\n", id, g.lat, g.lon);
  }
  for (const GeoFix& fix : predicted.fixes) {
    if (fix.status != FixStatus::kOk) continue;
    const auto it = gt.find(fix.frame_id);
    const std::string error =
        it == gt.end()
            ? std::string()
            : fmt::format("{:.4f}", GeodesicDistanceM(fix.position, it->second));
    out << fmt::format("pred,{},{:.9f},{:.9f},{}\n", fix.frame_id,
                       fix.position.lat, fix.position.lon, error);
  }
}

Trajectory ReadTrajectoryCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return ReadTrajectoryCsv(in);
}

GroundTruth ReadGroundTruthCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return ReadGroundTruthCsv(in);
}

}  // namespace geofix
