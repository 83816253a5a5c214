#include "dclust/data.hpp"

#include "dclust/error.hpp"
#include "dclust/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace dclust {

void DataMatrix::validate() const {
  if (values.rows() < 1 || values.cols() < 1) {
    throw ParameterError("data matrix must have at least one row and one column");
  }
  if (!values.allFinite()) {
    throw ParameterError("data matrix contains non-finite entries");
  }
  if (labels && static_cast<Eigen::Index>(labels->size()) != values.rows()) {
    throw ParameterError("label vector length " + std::to_string(labels->size()) +
                         " does not match row count " + std::to_string(values.rows()));
  }
}

DataMatrix make_circles(std::size_t n, double noise, double factor, Rng& rng) {
  if (n < 2) throw ParameterError("make_circles: n must be at least 2");
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw ParameterError("make_circles: noise must be a finite non-negative number");
  }
  if (!(factor > 0.0 && factor < 1.0)) {
    throw ParameterError("make_circles: factor must lie in (0, 1)");
  }

  const std::size_t n_outer = (n + 1) / 2;
  const std::size_t n_inner = n / 2;

  DataMatrix out;
  out.values.resize(static_cast<Eigen::Index>(n), 2);
  out.labels = Labels(n);

  auto place_ring = [&](std::size_t offset, std::size_t count, double radius, int label) {
    for (std::size_t i = 0; i < count; ++i) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      const auto row = static_cast<Eigen::Index>(offset + i);
      out.values(row, 0) = radius * std::cos(angle);
      out.values(row, 1) = radius * std::sin(angle);
      (*out.labels)[offset + i] = label;
    }
  };
  place_ring(0, n_outer, 1.0, 0);
  place_ring(n_outer, n_inner, factor, 1);

  if (noise > 0.0) {
    for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) out.values(i, j) += rng.normal(0.0, noise);
    }
  }
  return out;
}

DataMatrix make_gaussian_blobs(const Matrix& means, std::span<const double> stds,
                               std::span<const std::size_t> counts, Rng& rng) {
  const auto k = static_cast<std::size_t>(means.rows());
  if (k < 1 || means.cols() < 1) throw ParameterError("make_gaussian_blobs: need at least one mean");
  if (stds.size() != k || counts.size() != k) {
    throw DimensionError("make_gaussian_blobs: stds and counts must have one entry per mean");
  }
  std::size_t total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (!(stds[c] > 0.0) || !std::isfinite(stds[c])) {
      throw ParameterError("make_gaussian_blobs: std of component " + std::to_string(c) +
                           " must be positive");
    }
    total += counts[c];
  }
  if (total == 0) throw ParameterError("make_gaussian_blobs: total count is zero");

  DataMatrix out;
  out.values.resize(static_cast<Eigen::Index>(total), means.cols());
  out.labels = Labels(total);
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i, ++row) {
      for (Eigen::Index j = 0; j < means.cols(); ++j) {
        out.values(row, j) = rng.normal(means(static_cast<Eigen::Index>(c), j), stds[c]);
      }
      (*out.labels)[static_cast<std::size_t>(row)] = static_cast<int>(c);
    }
  }
  return out;
}

DataMatrix standardize(const DataMatrix& X) {
  X.validate();
  const auto n = static_cast<double>(X.rows());
  DataMatrix out = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.values.col(j).sum() / n;
    const double var = (X.values.col(j).array() - mean).square().sum() / n;
    const double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
      throw DegenerateInputError("standardize: column f" + std::to_string(j) +
                                 " has zero variance");
    }
    out.values.col(j) = (X.values.col(j).array() - mean) / sd;
  }
  return out;
}

void write_csv(const DataMatrix& X, const std::filesystem::path& path) {
  X.validate();
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (j) os << ',';
    os << 'f' << j;
  }
  if (X.labels) os << ",label";
  os << '\n';
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (j) os << ',';
      os << format_double(X.values(i, j));
    }
    if (X.labels) os << ',' << (*X.labels)[static_cast<std::size_t>(i)];
    os << '\n';
  }
  if (!os) throw IoError("failed while writing " + path.string());
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

DataMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(is, line)) throw IoError(path.string() + ": empty file");
  const auto header = split_fields(line);
  bool has_labels = !header.empty() && header.back() == "label";
  const std::size_t d = header.size() - (has_labels ? 1 : 0);
  if (d == 0) throw IoError(path.string() + ": header has no feature columns");
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      throw IoError(path.string() + ": expected column f" + std::to_string(j) + ", found '" +
                    header[j] + "'");
    }
  }

  std::vector<double> values;
  Labels labels;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " fields, found " +
                    std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < d; ++j) values.push_back(parse_number<double>(fields[j], path, line_no));
    if (has_labels) labels.push_back(parse_number<int>(fields[d], path, line_no));
  }
  const auto n = static_cast<Eigen::Index>(values.size() / d);
  if (n == 0) throw IoError(path.string() + ": no data rows");

  DataMatrix out;
  out.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, static_cast<Eigen::Index>(d));
  if (has_labels) out.labels = std::move(labels);
  out.validate();
  return out;
}

}  // namespace dclust
