#include "dclust/baselines.hpp"

#include "dclust/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace dclust {

void Partition::validate() const {
  if (labels.empty()) throw ParameterError("partition: no samples");
  if (clusters < 1) throw ParameterError("partition: cluster count must be positive");
  for (int l : labels) {
    if (l < 0 || l >= clusters) {
      throw ParameterError("partition: label " + std::to_string(l) + " outside [0, " +
                           std::to_string(clusters) + ")");
    }
  }
}

namespace {

struct Restart {
  Labels labels;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

// k-means++: first centre uniform, then proportional to squared distance to
// the nearest chosen centre.
Matrix seed_plus_plus(const Matrix& X, int K, Rng& rng) {
  const Eigen::Index n = X.rows();
  Matrix C(K, X.cols());
  C.row(0) = X.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n))));
  Vector closest = (X.rowwise() - C.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < K; ++c) {
    const double total = closest.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= closest[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    }
    C.row(c) = X.row(pick);
    closest = closest.cwiseMin((X.rowwise() - C.row(c)).rowwise().squaredNorm());
  }
  return C;
}

// Labels and inertia for fixed centroids.
double assign(const Matrix& X, const Matrix& C, Labels& labels, Vector& dist) {
  const Matrix D = pairwise_sq_dist(X, C);
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::Index best = 0;
    D.row(i).minCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    dist[i] = D(i, best);
    inertia += D(i, best);
  }
  return inertia;
}

Restart lloyd(const Matrix& X, const KMeansOptions& opt, double tol_abs, Rng& rng) {
  const Eigen::Index n = X.rows();
  const int K = opt.clusters;
  Restart r;
  r.centroids = seed_plus_plus(X, K, rng);
  r.labels.assign(static_cast<std::size_t>(n), 0);
  Vector dist(n);
  r.inertia = assign(X, r.centroids, r.labels, dist);
  r.trace.push_back(r.inertia);

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    Matrix sums = Matrix::Zero(K, X.cols());
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(K);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = r.labels[static_cast<std::size_t>(i)];
      sums.row(l) += X.row(i);
      ++counts[l];
    }
    Matrix next(K, X.cols());
    for (int k = 0; k < K; ++k) {
      if (counts[k] > 0) {
        next.row(k) = sums.row(k) / static_cast<double>(counts[k]);
      } else {
        // Empty cluster: move it onto the point worst served by its centroid.
        Eigen::Index far = 0;
        dist.maxCoeff(&far);
        next.row(k) = X.row(far);
        dist[far] = 0.0;
      }
    }
    const double shift = (next - r.centroids).squaredNorm();
    r.centroids = std::move(next);
    r.inertia = assign(X, r.centroids, r.labels, dist);
    r.trace.push_back(r.inertia);
    if (shift <= tol_abs) break;
  }
  return r;
}

}  // namespace

KMeansResult kmeans(const Matrix& X, const KMeansOptions& options, Rng& rng) {
  if (options.clusters < 1) throw ParameterError("kmeans: K must be at least 1");
  if (options.clusters > X.rows()) {
    throw ParameterError("kmeans: K = " + std::to_string(options.clusters) +
                         " exceeds the number of samples " + std::to_string(X.rows()));
  }
  if (options.n_init < 1 || options.max_iter < 1) {
    throw ParameterError("kmeans: n_init and max_iter must be positive");
  }
  if (!(options.tol >= 0.0)) throw ParameterError("kmeans: tol must be non-negative");
  if (!X.allFinite()) throw ParameterError("kmeans: data contains non-finite entries");

  const Vector var = (X.rowwise() - X.colwise().mean()).colwise().squaredNorm() /
                     static_cast<double>(X.rows());
  const double tol_abs = options.tol * var.mean();

  KMeansResult best;
  bool have = false;
  for (int restart = 0; restart < options.n_init; ++restart) {
    Rng sub = rng.derive(static_cast<std::uint64_t>(restart));
    Restart r = lloyd(X, options, tol_abs, sub);
    if (!have || r.inertia < best.inertia) {
      best.partition = Partition{std::move(r.labels), options.clusters};
      best.centroids = std::move(r.centroids);
      best.inertia = r.inertia;
      best.iterations = static_cast<int>(r.trace.size()) - 1;
      best.inertia_trace = std::move(r.trace);
      have = true;
    }
  }
  return best;
}

Labels assign_to_centroids(const Matrix& X, const Matrix& centroids) {
  if (X.cols() != centroids.cols()) throw DimensionError("assign_to_centroids: dimension mismatch");
  Labels labels(static_cast<std::size_t>(X.rows()));
  Vector dist(X.rows());
  assign(X, centroids, labels, dist);
  return labels;
}

double kernel_kmeans_score(const Partition& part, const KernelMatrix& kernel) {
  part.validate();
  const auto n = static_cast<Eigen::Index>(part.labels.size());
  if (kernel.values.rows() != n || kernel.values.cols() != n) {
    throw DimensionError("kernel_kmeans_score: kernel is not the n x n training Gram");
  }
  std::vector<double> within(static_cast<std::size_t>(part.clusters), 0.0);
  std::vector<long> sizes(static_cast<std::size_t>(part.clusters), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto li = static_cast<std::size_t>(part.labels[static_cast<std::size_t>(i)]);
    ++sizes[li];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (part.labels[static_cast<std::size_t>(j)] == static_cast<int>(li)) within[li] += kernel.values(i, j);
    }
  }
  double score = 0.0;
  for (std::size_t k = 0; k < within.size(); ++k) {
    if (sizes[k] == 0) {
      throw DegenerateInputError("kernel_kmeans_score: cluster " + std::to_string(k) + " is empty");
    }
    score -= within[k] / static_cast<double>(sizes[k]);
  }
  return score;
}

SpectralResult spectral(const Matrix& X, int clusters, const KernelSpec& affinity, Rng& rng, int n_init) {
  if (clusters < 1 || clusters > X.rows()) {
    throw ParameterError("spectral: K must lie in [1, n]");
  }
  Matrix A = gram(X, X, affinity).values;
  A.diagonal().setZero();
  const Vector degree = A.rowwise().sum();
  for (Eigen::Index i = 0; i < degree.size(); ++i) {
    if (!(degree[i] > 0.0)) {
      throw DegenerateInputError("spectral: sample " + std::to_string(i) +
                                 " is an isolated vertex (zero degree)");
    }
  }
  const Vector d_inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  Matrix L = -(d_inv_sqrt.asDiagonal() * A * d_inv_sqrt.asDiagonal());
  L.diagonal().array() += 1.0;
  L = 0.5 * (L + L.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(L);
  if (solver.info() != Eigen::Success) {
    throw NumericError("spectral: symmetric eigensolver did not converge");
  }
  SpectralResult out;
  out.eigenvalues = solver.eigenvalues();
  out.embedding = solver.eigenvectors().leftCols(clusters);
  for (Eigen::Index i = 0; i < out.embedding.rows(); ++i) {
    const double norm = out.embedding.row(i).norm();
    if (!(norm > 0.0)) throw NumericError("spectral: zero embedding row " + std::to_string(i));
    out.embedding.row(i) /= norm;
  }
  KMeansOptions opt;
  opt.clusters = clusters;
  opt.n_init = n_init;
  out.partition = kmeans(out.embedding, opt, rng).partition;
  return out;
}

}  // namespace dclust
