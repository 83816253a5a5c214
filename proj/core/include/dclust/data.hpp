#pragma once

#include "dclust/rng.hpp"
#include "dclust/types.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>

namespace dclust {

/// n x d observations (rows are samples) with optional ground-truth labels.
/// Labels are carried for evaluation only; no fitting routine reads them.
struct DataMatrix {
  Matrix values;
  std::optional<Labels> labels;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  /// Throws ParameterError on empty shape, non-finite entries or a label
  /// vector of the wrong length.
  void validate() const;
};

/// Two concentric rings. The outer ring (radius 1, label 0) gets ceil(n/2)
/// points and the inner ring (radius `factor`, label 1) floor(n/2); angles
/// are equally spaced on each ring before Gaussian noise is added.
DataMatrix make_circles(std::size_t n, double noise, double factor, Rng& rng);

/// Isotropic Gaussian components; row k of `means` is the k-th centre.
DataMatrix make_gaussian_blobs(const Matrix& means, std::span<const double> stds,
                               std::span<const std::size_t> counts, Rng& rng);

/// Per-column z-score with the population (divide-by-n) standard deviation.
DataMatrix standardize(const DataMatrix& X);

/// CSV with header `f0,...,f{d-1}[,label]`. Values are written with 17
/// significant digits so that they round-trip exactly.
void write_csv(const DataMatrix& X, const std::filesystem::path& path);
DataMatrix read_csv(const std::filesystem::path& path);

}  // namespace dclust
