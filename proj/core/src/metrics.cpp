#include "dclust/metrics.hpp"

#include "dclust/error.hpp"
#include "dclust/kernels.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dclust {

namespace {

// Maps arbitrary non-negative labels to 0..m-1 in sorted order.
std::vector<int> compress(std::span<const int> labels, int& count) {
  std::map<int, int> ids;
  for (int l : labels) {
    if (l < 0) throw ParameterError("labels must be non-negative, found " + std::to_string(l));
    ids.emplace(l, 0);
  }
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  count = next;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(ids[l]);
  return out;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

int count_clusters(std::span<const int> labels) {
  return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
}

Contingency contingency(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw DimensionError("contingency: label vectors have lengths " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
  }
  int ca = 0, cb = 0;
  const auto ia = compress(a, ca);
  const auto ib = compress(b, cb);
  Contingency c;
  c.table = Eigen::MatrixXi::Zero(ca, cb);
  for (std::size_t i = 0; i < ia.size(); ++i) ++c.table(ia[i], ib[i]);
  c.row_sums = c.table.rowwise().sum();
  c.col_sums = c.table.colwise().sum().transpose();
  c.total = static_cast<long>(a.size());
  return c;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DimensionError("ari: label vectors differ in length");
  if (a.size() < 2) throw ParameterError("ari: need at least two samples");
  const Contingency c = contingency(a, b);

  // Pair counts are integers. Scaling numerator and denominator by
  // 2 * C(n, 2) keeps both exact, so a single rounding happens at the end.
  long double index = 0, sum_a = 0, sum_b = 0;
  for (Eigen::Index i = 0; i < c.table.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.table.cols(); ++j) index += choose2(c.table(i, j));
  }
  for (Eigen::Index i = 0; i < c.row_sums.size(); ++i) sum_a += choose2(c.row_sums[i]);
  for (Eigen::Index j = 0; j < c.col_sums.size(); ++j) sum_b += choose2(c.col_sums[j]);
  const long double pairs = choose2(static_cast<long double>(c.total));
  const long double numer = 2 * index * pairs - 2 * sum_a * sum_b;
  const long double denom = (sum_a + sum_b) * pairs - 2 * sum_a * sum_b;
  // Both partitions trivial (all one cluster or all singletons).
  if (denom == 0) return 1.0;
  return static_cast<double>(numer / denom);
}

Silhouette silhouette_precomputed(const Matrix& D, std::span<const int> labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (D.rows() != n || D.cols() != n) {
    throw DimensionError("silhouette: distance matrix is not n x n");
  }
  int m = 0;
  const auto ids = compress(labels, m);
  if (m < 2) throw DegenerateInputError("silhouette: at least two clusters are required");

  std::vector<long> sizes(static_cast<std::size_t>(m), 0);
  for (int id : ids) ++sizes[static_cast<std::size_t>(id)];

  Silhouette out;
  out.per_sample.resize(labels.size());
  std::vector<double> sums(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) sums[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])] += D(i, j);
    const auto own = static_cast<std::size_t>(ids[static_cast<std::size_t>(i)]);
    double s = 0.0;
    if (sizes[own] > 1) {
      const double intra = sums[own] / static_cast<double>(sizes[own] - 1);
      double outer = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < sums.size(); ++k) {
        if (k != own) outer = std::min(outer, sums[k] / static_cast<double>(sizes[k]));
      }
      const double denom = std::max(intra, outer);
      s = denom > 0.0 ? (outer - intra) / denom : 0.0;
    }
    out.per_sample[static_cast<std::size_t>(i)] = s;
  }
  double total = 0.0;
  for (double s : out.per_sample) total += s;
  out.mean = total / static_cast<double>(n);
  return out;
}

Silhouette silhouette(const Matrix& X, std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != X.rows()) {
    throw DimensionError("silhouette: label count does not match sample count");
  }
  return silhouette_precomputed(pairwise_sq_dist(X, X).cwiseSqrt(), labels);
}

}  // namespace dclust
