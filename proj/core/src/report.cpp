#include "dclust/report.hpp"

#include "dclust/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>

namespace dclust {

namespace {

using nlohmann::ordered_json;

ordered_json number_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string report_to_json(const RunRecord& record) {
  ordered_json doc;
  doc["command"] = record.command;
  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : record.config) config[key] = value;
  doc["config"] = std::move(config);

  ordered_json metrics = ordered_json::object();
  metrics["ari"] = record.metrics.ari ? number_or_null(*record.metrics.ari) : ordered_json(nullptr);
  metrics["silhouette"] =
      record.metrics.silhouette ? number_or_null(*record.metrics.silhouette) : ordered_json(nullptr);
  metrics["kernel_kmeans_score"] = record.metrics.kernel_kmeans_score
                                       ? number_or_null(*record.metrics.kernel_kmeans_score)
                                       : ordered_json(nullptr);
  doc["metrics"] = std::move(metrics);

  for (const auto& [key, value] : record.values) doc[key] = number_or_null(value);

  ordered_json history = ordered_json::array();
  for (double v : record.history) history.push_back(number_or_null(v));
  doc["history"] = std::move(history);
  doc["labels"] = record.labels;
  if (record.model_json) doc["model"] = ordered_json::parse(*record.model_json);
  if (record.elapsed_seconds) doc["elapsed_seconds"] = *record.elapsed_seconds;
  return doc.dump(2) + "\n";
}

void write_history_csv(const std::vector<double>& history, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << "epoch,value\n";
  for (std::size_t i = 0; i < history.size(); ++i) os << i << ',' << format_double(history[i]) << '\n';
  if (!os) throw IoError("failed while writing " + path.string());
}

void write_labels_csv(const Labels& labels, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) os << i << ',' << labels[i] << '\n';
  if (!os) throw IoError("failed while writing " + path.string());
}

}  // namespace dclust
