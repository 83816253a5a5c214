#pragma once

// Reference computations for tests. Everything here is written as plain
// loops straight from the definitions and shares no code path with the
// library beyond the data types.

#include "dclust/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace dclust::oracle {

inline double sq_dist(const Matrix& X, Eigen::Index i, const Matrix& Y, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double d = X(i, c) - Y(j, c);
    s += d * d;
  }
  return s;
}

inline Matrix softmax_loop(const Matrix& Z) {
  Matrix P(Z.rows(), Z.cols());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < Z.cols(); ++k) mx = std::max(mx, Z(i, k));
    double s = 0.0;
    for (Eigen::Index k = 0; k < Z.cols(); ++k) s += std::exp(Z(i, k) - mx);
    for (Eigen::Index k = 0; k < Z.cols(); ++k) P(i, k) = std::exp(Z(i, k) - mx) / s;
  }
  return P;
}

/// Plug-in MI: (1/n) sum_i sum_k P_ik log(P_ik / pbar_k), 0 log 0 = 0.
inline double mi_plugin(const Matrix& P) {
  const auto n = static_cast<double>(P.rows());
  std::vector<double> pbar(static_cast<std::size_t>(P.cols()), 0.0);
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index k = 0; k < P.cols(); ++k) pbar[static_cast<std::size_t>(k)] += P(i, k) / n;
  double total = 0.0;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index k = 0; k < P.cols(); ++k)
      if (P(i, k) > 0.0) total += P(i, k) * std::log(P(i, k) / pbar[static_cast<std::size_t>(k)]);
  return total / n;
}

/// One-vs-all MMD-GEMINI from the definition: sum_k pbar_k sqrt((a_k-b)^T K (a_k-b)).
inline double mmd_gemini_plugin(const Matrix& P, const Matrix& K) {
  const Eigen::Index n = P.rows();
  double total = 0.0;
  for (Eigen::Index k = 0; k < P.cols(); ++k) {
    double mass = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mass += P(i, k);
    const double pbar = mass / static_cast<double>(n);
    if (pbar < 1e-12) continue;
    double q = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double di = P(i, k) / mass - 1.0 / static_cast<double>(n);
        const double dj = P(j, k) / mass - 1.0 / static_cast<double>(n);
        q += di * K(i, j) * dj;
      }
    }
    total += pbar * std::sqrt(std::max(q, 0.0));
  }
  return total;
}

/// Central finite-difference gradient of f at x.
inline Vector numeric_gradient(const std::function<double(const Vector&)>& f, Vector x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double plus = f(x);
    x[i] = saved - h;
    const double minus = f(x);
    x[i] = saved;
    g[i] = (plus - minus) / (2.0 * h);
  }
  return g;
}

/// Same as numeric_gradient but over a matrix argument.
inline Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, Matrix X, double h) {
  Matrix G(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double saved = X(i, j);
      X(i, j) = saved + h;
      const double plus = f(X);
      X(i, j) = saved - h;
      const double minus = f(X);
      X(i, j) = saved;
      G(i, j) = (plus - minus) / (2.0 * h);
    }
  }
  return G;
}

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
template <class A, class B>
double max_rel_error(const A& a, const B& b, double floor = 1e-4) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = a.reshaped()(i), y = b.reshaped()(i);
    worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), floor}));
  }
  return worst;
}

/// Centroid-form within-cluster sum of squares.
inline double centroid_inertia(const Matrix& X, const std::vector<int>& labels, int K) {
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    std::vector<Eigen::Index> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == k) members.push_back(static_cast<Eigen::Index>(i));
    if (members.empty()) continue;
    RowVector mu = RowVector::Zero(X.cols());
    for (auto i : members) mu += X.row(i);
    mu /= static_cast<double>(members.size());
    for (auto i : members) total += (X.row(i) - mu).squaredNorm();
  }
  return total;
}

/// ARI from explicit pair enumeration.
inline double ari_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double both = 0, in_a = 0, in_b = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      both += sa && sb;
      in_a += sa;
      in_b += sb;
      pairs += 1;
    }
  }
  const double expected = in_a * in_b / pairs;
  const double max_index = 0.5 * (in_a + in_b);
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

/// Silhouette straight from the per-sample definition with Euclidean cost.
inline std::vector<double> silhouette_loop(const Matrix& X, const std::vector<int>& labels) {
  const std::size_t n = labels.size();
  int K = 0;
  for (int l : labels) K = std::max(K, l + 1);
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(static_cast<std::size_t>(K), 0.0);
    std::vector<int> cnt(static_cast<std::size_t>(K), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[static_cast<std::size_t>(labels[j])] +=
          std::sqrt(sq_dist(X, static_cast<Eigen::Index>(i), X, static_cast<Eigen::Index>(j)));
      ++cnt[static_cast<std::size_t>(labels[j])];
    }
    const auto own = static_cast<std::size_t>(labels[i]);
    if (cnt[own] == 0) continue;
    const double intra = sum[own] / cnt[own];
    double outer = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sum.size(); ++k)
      if (k != own && cnt[k] > 0) outer = std::min(outer, sum[k] / cnt[k]);
    const double denom = std::max(intra, outer);
    s[i] = denom > 0 ? (outer - intra) / denom : 0.0;
  }
  return s;
}

}  // namespace dclust::oracle
