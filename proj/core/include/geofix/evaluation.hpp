#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "geofix/geodesy.hpp"
#include "geofix/geopositioning.hpp"

namespace geofix {

// Reported accuracy of the GPS ground truth the metrics are read against.
inline constexpr double kGroundTruthAccuracyM = 2.5;

using GroundTruth = std::map<std::int64_t, GeoPoint>;

struct FrameError {
  std::int64_t frame_id = 0;
  double error_m = 0.0;
};

struct EvaluationReport {
  std::string sequence;
  double mae_m = 0.0;
  double max_m = 0.0;
  double fix_rate = 0.0;
  std::size_t n_frames = 0;
  std::size_t n_ok = 0;
  std::vector<std::int64_t> frame_ids;  // every evaluated frame, Ok or not
  std::vector<FrameError> per_frame;    // Ok frames only
};

/// MAE and Max of the geodesic error over Ok frames; NoFix frames only lower
/// fix_rate. Throws Error(kNoOkFrames) when nothing can be scored and
/// Error(kInvalidArgument) when an Ok frame has no ground truth.
EvaluationReport Evaluate(const Trajectory& predicted, const GroundTruth& gt,
                          std::string sequence = "");

/// (mae_without - mae_with) / mae_without * 100.
double ImprovementPct(double mae_without, double mae_with);

struct ImprovementRow {
  std::string sequence;
  double mae_without = 0.0;
  double max_without = 0.0;
  double mae_with = 0.0;
  double max_with = 0.0;
  double improvement_pct = 0.0;
};

struct ImprovementTable {
  std::vector<ImprovementRow> rows;
  double mean_improvement_pct = 0.0;
};

/// Pairs reports by position. Throws Error(kMismatchedSequences) when counts,
/// sequence names or evaluated frame sets differ.
ImprovementTable CompareRuns(std::span<const EvaluationReport> without_gis,
                             std::span<const EvaluationReport> with_gis);

std::string FormatReport(const EvaluationReport& report);
std::string FormatTable(const ImprovementTable& table);

std::string ReportToJson(std::span<const EvaluationReport> reports);
/// Accepts a single report object, an array of reports, or
/// {"sequences": [...]}.
std::vector<EvaluationReport> ReportsFromJson(const std::string& text);

}  // namespace geofix
