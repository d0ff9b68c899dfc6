#pragma once

#include <iosfwd>
#include <string>

#include "geofix/evaluation.hpp"
#include "geofix/geopositioning.hpp"

namespace geofix {

// Trajectory CSV header:
//   frame_id,status,lat,lon,branch,n_valid,mean_reproj_px
// NoFix rows leave lat, lon and mean_reproj_px empty. Fixed precision keeps
// reruns byte-identical.
void WriteTrajectoryCsv(std::ostream& out, const Trajectory& trajectory);
Trajectory ReadTrajectoryCsv(std::istream& in);

/// FeatureCollection: a LineString through the Ok fixes followed by one
/// Point feature per Ok fix carrying its per-frame properties.
void WriteTrajectoryGeoJson(std::ostream& out, const Trajectory& trajectory);

// Ground truth CSV: frame_id,lat,lon
void WriteGroundTruthCsv(std::ostream& out, const GroundTruth& gt);
GroundTruth ReadGroundTruthCsv(std::istream& in);

/// Long-form rows "series,frame_id,lat,lon,error_m" for plotting predicted
/// (series "pred", Ok fixes only) against ground truth (series "gt").
void WritePlotData(std::ostream& out, const Trajectory& predicted,
                   const GroundTruth& gt);

Trajectory ReadTrajectoryCsvFile(const std::string& path);
GroundTruth ReadGroundTruthCsvFile(const std::string& path);

}  // namespace geofix
