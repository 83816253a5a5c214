#pragma once

#include "dclust/kernels.hpp"
#include "dclust/types.hpp"

#include <optional>
#include <string>

namespace dclust {

/// Clusters whose proportion falls below this contribute nothing to MMD-GEMINI.
inline constexpr double kEmptyClusterProportion = 1e-12;

/// Value of a (maximised) objective together with its gradient with respect
/// to the responsibilities. `dparams_extra` holds terms that act directly on
/// model parameters, such as the RIM weight penalty.
struct ObjectiveValue {
  double value = 0.0;
  Matrix dP;
  std::optional<Vector> dparams_extra;
};

/// Monte-Carlo cluster proportions: column means of P.
Vector proportions(const Matrix& P);

/// Plug-in mutual information between samples and clusters,
/// (1/n) sum_i KL(P_i || pbar), with 0 log 0 = 0.
ObjectiveValue mutual_information(const Matrix& P);

struct EntropyTerms {
  double marginal;     ///< H(y), fairness
  double conditional;  ///< H(y|x), firmness
};

/// MI = marginal - conditional.
EntropyTerms fairness_firmness(const Matrix& P);

/// MI minus lambda * ||w||^2. `penalized_weights` is the flat parameter
/// vector with unpenalised entries (biases) zeroed.
ObjectiveValue regularized_mi(const Matrix& P, const Vector& penalized_weights, double lambda);

/// One-vs-all MMD-GEMINI: sum_k pbar_k * MMD(p(x|y=k), p_data) with the
/// cluster conditionals represented as importance weights over the samples.
/// `kernel` must be the n x n Gram matrix of the training set.
ObjectiveValue mmd_gemini_ova(const Matrix& P, const KernelMatrix& kernel);

enum class ObjectiveKind { mi, rim, mmd_gemini };

std::string to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(const std::string& name);

}  // namespace dclust
