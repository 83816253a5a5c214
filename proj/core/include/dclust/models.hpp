#pragma once

#include "dclust/kernels.hpp"
#include "dclust/rng.hpp"
#include "dclust/types.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace dclust {

/// Multinomial logistic regression: logits = X W + b.
/// Flat layout: W row-major (d x K), then b.
struct LinearModel {
  Matrix W;  // d x K
  Vector b;  // K
};

/// Kernelised softmax over a fixed reference set:
/// logits = kappa(X, X_ref) A + b. Flat layout: A row-major (n_ref x K), then b.
struct KernelModel {
  Matrix A;  // n_ref x K
  Vector b;  // K
  Matrix reference;
  KernelSpec spec;
};

/// One hidden rectifier layer: logits = relu(X W1 + b1) W2 + b2.
/// Flat layout: W1 row-major (d x H), b1, W2 row-major (H x K), b2.
struct MlpModel {
  Matrix W1;  // d x H
  Vector b1;  // H
  Matrix W2;  // H x K
  Vector b2;  // K
};

/// Free per-sample logits; row i of softmax(L) is the responsibility of
/// training sample i. Only defined on the dataset it was bound to.
/// Flat layout: L row-major (n x K).
struct NonparametricModel {
  Matrix L;  // n x K
  std::uint64_t fingerprint = 0;
};

using Model = std::variant<LinearModel, KernelModel, MlpModel, NonparametricModel>;

enum class ModelKind { linear, kernel, mlp, nonparametric };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);
ModelKind kind_of(const Model& model);

Eigen::Index num_clusters(const Model& model);
Eigen::Index num_params(const Model& model);

/// False only for the nonparametric model, which cannot score unseen samples.
bool generalises(const Model& model);

/// FNV-1a hash over the shape and bytes of X; binds nonparametric models.
std::uint64_t fingerprint(const Matrix& X);

struct InitOptions {
  Eigen::Index clusters = 2;
  Eigen::Index hidden = 20;        ///< MLP only
  double scale = -1.0;  ///< weight std; negative selects 1/sqrt(fan-in) (1/n for kernel models)
  KernelSpec kernel{};             ///< kernel model only
};

/// Weights i.i.d. N(0, scale^2), biases 0. X supplies the input dimension,
/// the kernel reference set, or the rows bound by a nonparametric model.
Model init_model(ModelKind kind, const Matrix& X, const InitOptions& options, Rng& rng);

/// Pre-softmax outputs, n x K.
Matrix logits(const Model& model, const Matrix& X);

/// Row-wise softmax of logits.
Matrix forward(const Model& model, const Matrix& X);

/// Numerically stable row softmax (max subtraction).
Matrix softmax_rows(const Matrix& logits);

/// Gradient of a scalar J with respect to the flat parameters, given dJ/dlogits.
Vector backward_logits(const Model& model, const Matrix& X, const Matrix& dlogits);

/// Gradient of J with respect to the flat parameters, given dJ/dP where
/// P = forward(model, X). Chains through the softmax Jacobian.
Vector backward(const Model& model, const Matrix& X, const Matrix& dP);

Vector get_params(const Model& model);
void set_params(Model& model, const Vector& theta);

/// 1 for weight entries subject to the l2 penalty, 0 for biases and
/// nonparametric logits. Same layout as get_params.
Vector weight_mask(const Model& model);

}  // namespace dclust
