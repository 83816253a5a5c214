#include "dclust/objectives.hpp"

#include "dclust/error.hpp"

#include <cmath>

namespace dclust {

namespace {

// Floor applied inside logarithms; with the P * log P products this realises
// the 0 log 0 = 0 convention.
constexpr double kLogFloor = 1e-300;

// Below this the square root of the MMD quadratic form is treated as zero
// and its gradient taken as zero.
constexpr double kSqrtFloor = 1e-18;

double safe_log(double x) { return std::log(std::max(x, kLogFloor)); }

}  // namespace

Vector proportions(const Matrix& P) {
  if (P.rows() < 1) throw DimensionError("proportions: empty responsibility matrix");
  return P.colwise().mean().transpose();
}

ObjectiveValue mutual_information(const Matrix& P) {
  const auto n = static_cast<double>(P.rows());
  const Vector pbar = proportions(P);
  const Eigen::Index K = P.cols();

  Vector log_pbar(K);
  for (Eigen::Index k = 0; k < K; ++k) log_pbar[k] = safe_log(pbar[k]);

  ObjectiveValue out;
  out.dP.resize(P.rows(), K);
  double total = 0.0;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const double p = P(i, k);
      const double log_ratio = safe_log(p) - log_pbar[k];
      total += p * log_ratio;
      // The +1 terms from differentiating p log p and the marginal cancel.
      out.dP(i, k) = log_ratio / n;
    }
  }
  out.value = total / n;
  return out;
}

EntropyTerms fairness_firmness(const Matrix& P) {
  const Vector pbar = proportions(P);
  EntropyTerms out{0.0, 0.0};
  for (Eigen::Index k = 0; k < pbar.size(); ++k) out.marginal -= pbar[k] * safe_log(pbar[k]);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index k = 0; k < P.cols(); ++k) acc -= P(i, k) * safe_log(P(i, k));
  }
  out.conditional = acc / static_cast<double>(P.rows());
  return out;
}

ObjectiveValue regularized_mi(const Matrix& P, const Vector& penalized_weights, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("rim: lambda must be a finite non-negative number");
  }
  ObjectiveValue out = mutual_information(P);
  out.value -= lambda * penalized_weights.squaredNorm();
  out.dparams_extra = -2.0 * lambda * penalized_weights;
  return out;
}

ObjectiveValue mmd_gemini_ova(const Matrix& P, const KernelMatrix& kernel) {
  const Eigen::Index n = P.rows();
  const Eigen::Index K = P.cols();
  const Matrix& G = kernel.values;
  if (G.rows() != n || G.cols() != n) {
    throw DimensionError("mmd_gemini_ova: kernel is " + std::to_string(G.rows()) + "x" +
                         std::to_string(G.cols()) + " but there are " + std::to_string(n) +
                         " samples");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const Vector pbar = proportions(P);
  const Vector col_sums = P.colwise().sum().transpose();

  // Shared pieces: G beta and beta^T G beta with beta uniform.
  const Vector G_beta = G.rowwise().mean();
  const double beta_G_beta = G_beta.mean();

  ObjectiveValue out;
  out.value = 0.0;
  out.dP = Matrix::Zero(n, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (pbar[k] < kEmptyClusterProportion) continue;
    const Vector alpha = P.col(k) / col_sums[k];
    // G (alpha - beta)
    const Vector G_diff = G * alpha - G_beta;
    const double quad = alpha.dot(G_diff) - alpha.dot(G_beta) + beta_G_beta;
    if (quad < kSqrtFloor) continue;
    const double mmd = std::sqrt(quad);
    out.value += pbar[k] * mmd;

    // d/dP_ik [pbar_k mmd_k] = (1/n) [mmd_k + g_i - alpha^T g], g = G(alpha - beta) / mmd_k.
    const Vector g = G_diff / mmd;
    const double alpha_g = alpha.dot(g);
    out.dP.col(k) = inv_n * ((g.array() - alpha_g) + mmd).matrix();
  }
  return out;
}

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::mi: return "mi";
    case ObjectiveKind::rim: return "rim";
    case ObjectiveKind::mmd_gemini: return "mmd-gemini";
  }
  return "unknown";
}

ObjectiveKind objective_kind_from_string(const std::string& name) {
  if (name == "mi") return ObjectiveKind::mi;
  if (name == "rim") return ObjectiveKind::rim;
  if (name == "mmd-gemini") return ObjectiveKind::mmd_gemini;
  throw ParameterError("unknown objective '" + name + "' (expected mi, rim or mmd-gemini)");
}

}  // namespace dclust
