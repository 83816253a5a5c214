#pragma once

#include "dclust/types.hpp"

#include <span>
#include <vector>

namespace dclust {

struct Contingency {
  Eigen::MatrixXi table;  ///< rows index clusters of a, columns clusters of b
  Eigen::VectorXi row_sums;
  Eigen::VectorXi col_sums;
  long total = 0;
};

/// Labels must be non-negative; they need not be contiguous.
Contingency contingency(std::span<const int> a, std::span<const int> b);

/// Adjusted Rand index. Two single-cluster partitions score 1.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct Silhouette {
  double mean = 0.0;
  std::vector<double> per_sample;
};

/// Euclidean silhouette.
Silhouette silhouette(const Matrix& X, std::span<const int> labels);

/// Silhouette over a precomputed n x n distance (or cost) matrix, e.g. a
/// kernel-induced distance.
Silhouette silhouette_precomputed(const Matrix& distances, std::span<const int> labels);

/// Number of distinct labels.
int count_clusters(std::span<const int> labels);

}  // namespace dclust
