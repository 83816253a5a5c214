#pragma once

#include "dclust/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dclust {

struct ReportMetrics {
  std::optional<double> ari;
  std::optional<double> silhouette;
  std::optional<double> kernel_kmeans_score;
};

/// Everything a run writes to its JSON report. `config` echoes every
/// parameter needed to reproduce the run; keys are emitted in sorted order.
struct RunRecord {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<double> history;
  Labels labels;
  ReportMetrics metrics;
  std::map<std::string, double> values;   ///< e.g. final_objective, inertia
  std::optional<std::string> model_json;  ///< embedded verbatim as an object
  std::optional<double> elapsed_seconds;  ///< omitted unless timing was requested
};

/// Deterministic JSON: identical records produce identical bytes.
std::string report_to_json(const RunRecord& record);

/// `epoch,value` rows.
void write_history_csv(const std::vector<double>& history, const std::filesystem::path& path);

/// `index,label` rows.
void write_labels_csv(const Labels& labels, const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace dclust
