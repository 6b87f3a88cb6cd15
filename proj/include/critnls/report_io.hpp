#pragma once
#include <string>
#include <vector>

#include <critnls/experiments.hpp>
#include <critnls/fitting.hpp>

namespace critnls {

// Canonical report document: {id, verdict, reason, params, measurements,
// provenance} with fixed key order, so identical runs serialize to identical
// bytes. The document shape is described by configs/report.schema.json.
nlohmann::ordered_json report_json(const ExperimentReport& rep);

// Inverse of report_json (for the re-render command); throws on shape errors.
ExperimentReport report_from_json(const nlohmann::ordered_json& doc);

void write_report_json(const ExperimentReport& rep, const std::string& path);

// Two-column (key,value) export: nested objects are flattened with
// slash-joined keys, array entries indexed.
void write_report_csv(const ExperimentReport& rep, const std::string& path);

// One point set on a log-log chart, optionally with its fitted power law.
struct PlotSeries {
  std::string label;
  std::vector<double> xs, ys;
  bool has_fit = false;
  FitResult fit;
};

// Self-contained SVG (no external assets): decade grid, point markers, and a
// fit line per series that carries one. Nonpositive samples are dropped.
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

// JSON + CSV into dir/<id>.json,csv, plus dir/<id>.svg when the report has
// natural log-log content. Returns the paths written.
std::vector<std::string> write_report_bundle(const ExperimentReport& rep,
                                             const std::string& dir);

}  // namespace critnls
