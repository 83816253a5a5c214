#pragma once

#include "dclust/kernels.hpp"
#include "dclust/rng.hpp"
#include "dclust/types.hpp"

namespace dclust {

struct Partition {
  Labels labels;
  int clusters = 0;

  void validate() const;
};

struct KMeansOptions {
  int clusters = 2;
  int n_init = 10;
  int max_iter = 300;
  double tol = 1e-4;  ///< relative to the mean per-feature variance, as in common tooling
};

struct KMeansResult {
  Partition partition;
  Matrix centroids;  // K x d
  double inertia = 0.0;
  int iterations = 0;                  ///< Lloyd iterations of the best restart
  std::vector<double> inertia_trace;   ///< best restart, one value per iteration
};

/// Lloyd's algorithm with k-means++ seeding; the restart with the lowest
/// inertia wins (ties by restart index). An emptied cluster is re-seeded at
/// the point farthest from its assigned centroid.
KMeansResult kmeans(const Matrix& X, const KMeansOptions& options, Rng& rng);

/// Nearest-centroid labels.
Labels assign_to_centroids(const Matrix& X, const Matrix& centroids);

/// -sum_k (sum_{i,j in C_k} K_ij) / |C_k|. Throws DegenerateInputError on an
/// empty cluster.
double kernel_kmeans_score(const Partition& part, const KernelMatrix& kernel);

struct SpectralResult {
  Partition partition;
  Vector eigenvalues;  ///< full spectrum of the normalised Laplacian, ascending
  Matrix embedding;    ///< n x K, rows unit-norm
};

/// Normalised spectral clustering: zero-diagonal affinity from `affinity`,
/// L = I - D^-1/2 A D^-1/2, K smallest eigenvectors, rows l2-normalised,
/// then k-means on the embedding.
SpectralResult spectral(const Matrix& X, int clusters, const KernelSpec& affinity, Rng& rng,
                        int n_init = 10);

}  // namespace dclust
