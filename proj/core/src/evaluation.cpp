#include "geofix/evaluation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "geofix/error.hpp"

namespace geofix {

using nlohmann::json;

EvaluationReport Evaluate(const Trajectory& predicted, const GroundTruth& gt,
                          std::string sequence) {
  EvaluationReport report;
  report.sequence = std::move(sequence);
  report.n_frames = predicted.fixes.size();
  double sum = 0.0;
  for (const GeoFix& fix : predicted.fixes) {
    report.frame_ids.push_back(fix.frame_id);
    if (fix.status != FixStatus::kOk) continue;
    const auto it = gt.find(fix.frame_id);
    if (it == gt.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no ground truth for frame " + std::to_string(fix.frame_id));
    }
    const double err = GeodesicDistanceM(fix.position, it->second);
    report.per_frame.push_back({fix.frame_id, err});
    sum += err;
    report.max_m = std::max(report.max_m, err);
  }
  report.n_ok = report.per_frame.size();
  if (report.n_ok == 0) {
    throw Error(ErrorCode::kNoOkFrames, "trajectory has no Ok frame to score");
  }
  report.mae_m = sum / static_cast<double>(report.n_ok);
  report.fix_rate =
      static_cast<double>(report.n_ok) / static_cast<double>(report.n_frames);
  return report;
}

double ImprovementPct(double mae_without, double mae_with) {
  if (mae_without == mae_with) return 0.0;
  if (!(mae_without > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "improvement needs a positive baseline MAE");
  }
  return (mae_without - mae_with) / mae_without * 100.0;
}

ImprovementTable CompareRuns(std::span<const EvaluationReport> without_gis,
                             std::span<const EvaluationReport> with_gis) {
  if (without_gis.size() != with_gis.size() || without_gis.empty()) {
    throw Error(ErrorCode::kMismatchedSequences,
                fmt::format("{} vs {} sequences", without_gis.size(),
                            with_gis.size()));
  }
  ImprovementTable table;
  double sum = 0.0;
  for (std::size_t i = 0; i < without_gis.size(); ++i) {
    const EvaluationReport& a = without_gis[i];
    const EvaluationReport& b = with_gis[i];
    if (a.sequence != b.sequence || a.frame_ids != b.frame_ids) {
      throw Error(ErrorCode::kMismatchedSequences,
                  fmt::format("sequence {} ('{}' vs '{}') covers different "
                              "frames",
                              i + 1, a.sequence, b.sequence));
    }
    ImprovementRow row{a.sequence.empty() ? std::to_string(i + 1) : a.sequence,
                       a.mae_m,
                       a.max_m,
                       b.mae_m,
                       b.max_m,
                       ImprovementPct(a.mae_m, b.mae_m)};
    sum += row.improvement_pct;
    table.rows.push_back(std::move(row));
  }
  table.mean_improvement_pct = sum / static_cast<double>(table.rows.size());
  return table;
}

std::string FormatReport(const EvaluationReport& report) {
  std::string out;
  if (!report.sequence.empty()) {
    out += fmt::format("sequence     {}\n", report.sequence);
  }
  out += fmt::format("frames       {} ({} ok, fix rate {:.1f}%)\n",
                     report.n_frames, report.n_ok, 100.0 * report.fix_rate);
  out += fmt::format("MAE / Max    {:.2f} / {:.2f} m\n", report.mae_m,
                     report.max_m);
  out += fmt::format("note: ground truth accuracy is about +/-{:.1f} m\n",
                     kGroundTruthAccuracyM);
  return out;
}

std::string FormatTable(const ImprovementTable& table) {
  std::string out = fmt::format("{:<8}{:<24}{:<24}{}\n", "Seq.",
                                "MAE/Max(m) w/o. GIS", "MAE/Max(m) w/. GIS",
                                "MAE Imp.");
  for (const ImprovementRow& row : table.rows) {
    out += fmt::format(
        "{:<8}{:<24}{:<24}{:.2f}%\n", row.sequence,
        fmt::format("{:.2f} / {:.2f}", row.mae_without, row.max_without),
        fmt::format("{:.2f} / {:.2f}", row.mae_with, row.max_with),
        row.improvement_pct);
  }
  out += fmt::format("mean MAE improvement: {:.2f}%\n",
                     table.mean_improvement_pct);
  out += fmt::format("note: ground truth accuracy is about +/-{:.1f} m\n",
                     kGroundTruthAccuracyM);
  return out;
}

std::string ReportToJson(std::span<const EvaluationReport> reports) {
  json sequences = json::array();
  for (const EvaluationReport& r : reports) {
    json per_frame = json::array();
    for (const FrameError& e : r.per_frame) {
      per_frame.push_back({{"frame_id", e.frame_id}, {"error_m", e.error_m}});
    }
    sequences.push_back({{"sequence", r.sequence},
                         {"mae_m", r.mae_m},
                         {"max_m", r.max_m},
                         {"fix_rate", r.fix_rate},
                         {"n_frames", r.n_frames},
                         {"n_ok", r.n_ok},
                         {"frame_ids", r.frame_ids},
                         {"per_frame", std::move(per_frame)}});
  }
  json doc = {{"sequences", std::move(sequences)},
              {"ground_truth_accuracy_m", kGroundTruthAccuracyM}};
  return doc.dump(2) + "\n";
}

namespace {

EvaluationReport ReportFromJson(const json& j) {
  EvaluationReport r;
  r.sequence = j.value("sequence", "");
  r.mae_m = j.at("mae_m").get<double>();
  r.max_m = j.at("max_m").get<double>();
  r.fix_rate = j.value("fix_rate", 1.0);
  r.n_frames = j.value("n_frames", std::size_t{0});
  r.n_ok = j.value("n_ok", std::size_t{0});
  if (j.contains("frame_ids")) {
    r.frame_ids = j["frame_ids"].get<std::vector<std::int64_t>>();
  }
  if (j.contains("per_frame")) {
    for (const json& e : j["per_frame"]) {
      r.per_frame.push_back(
          {e.at("frame_id").get<std::int64_t>(), e.at("error_m").get<double>()});
    }
  }
  return r;
}

}  // namespace

std::vector<EvaluationReport> ReportsFromJson(const std::string& text) {
  try {
    const json doc = json::parse(text);
    const json* list = &doc;
    if (doc.is_object() && doc.contains("sequences")) list = &doc["sequences"];
    std::vector<EvaluationReport> reports;
    if (list->is_array()) {
      for (const json& j : *list) reports.push_back(ReportFromJson(j));
    } else {
      reports.push_back(ReportFromJson(*list));
    }
    return reports;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kDocumentMalformed,
                std::string("bad report JSON: ") + e.what());
  }
}

}  // namespace geofix
