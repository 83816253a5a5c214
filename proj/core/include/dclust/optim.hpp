#pragma once

#include "dclust/data.hpp"
#include "dclust/models.hpp"
#include "dclust/objectives.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dclust {

enum class OptimizerKind { adam, sgd };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_kind_from_string(const std::string& name);

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::adam;  ///< sgd: plain full-batch gradient steps
  int epochs = 1000;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  ObjectiveKind objective = ObjectiveKind::mi;
  double lambda = 0.1;                      ///< rim only
  std::optional<KernelKind> kernel;         ///< required by mmd-gemini
  std::optional<double> gamma;              ///< unset: default_gamma(X)

  void validate() const;
};

/// Adam with bias correction, minimising.
class Adam {
 public:
  Adam(Eigen::Index size, double lr, double beta1, double beta2, double eps);

  /// theta <- theta - lr * mhat / (sqrt(vhat) + eps)
  void step(Vector& theta, const Vector& grad);

  int steps_taken() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  int t_ = 0;
  Vector m_, v_;
};

/// Either Adam or plain gradient descent, selected by the config.
///
/// Adam rescales every coordinate to a step of roughly lr, which erases the
/// relative gradient magnitudes across samples. For the nonparametric model
/// under MI those magnitudes are what steer undecided samples toward the
/// smaller clusters, so plain descent is offered alongside.
class Optimizer {
 public:
  Optimizer(Eigen::Index size, const TrainConfig& cfg);

  /// Minimising step.
  void step(Vector& theta, const Vector& grad);

 private:
  OptimizerKind kind_;
  double lr_;
  Adam adam_;
};

struct FitReport {
  std::vector<double> history;  ///< objective value at the start of each epoch
  Model final_model;
  Labels labels;
  double final_objective = 0.0;
  double elapsed_seconds = 0.0;
};

/// Training context: the objective bound to one dataset. The MMD Gram
/// matrix and, for kernel models, the model's kernel features are built once.
class ObjectiveFunction {
 public:
  ObjectiveFunction(const Matrix& X, const TrainConfig& cfg);

  /// Returns the objective value; writes d(objective)/d(theta) to grad.
  double evaluate(const Model& model, Vector* grad) const;

  const std::optional<KernelMatrix>& kernel() const { return kernel_; }

 private:
  double evaluate_on(const Model& model, const Matrix& inputs, const Model& original,
                     Vector* grad) const;

  const Matrix& X_;
  ObjectiveKind kind_;
  double lambda_;
  std::optional<KernelMatrix> kernel_;
  // Kernel model features kappa(X, reference), keyed by the reference data.
  mutable std::optional<Matrix> features_;
  mutable const double* features_ref_ = nullptr;
};

/// Full-batch Adam ascent on the configured objective. Throws NumericError
/// if the objective becomes NaN.
FitReport fit(Model model, const Matrix& X, const TrainConfig& cfg);

/// Argmax of the responsibilities, ties to the lowest index.
Labels predict(const Model& model, const Matrix& X);

/// Row-wise argmax, ties to the lowest index.
Labels argmax_rows(const Matrix& M);

struct GradientCheckReport {
  double max_rel_error = 0.0;
  double max_abs_analytic = 0.0;
  double max_abs_numeric = 0.0;
  Eigen::Index worst_index = -1;
  bool passed = false;
};

/// Central finite differences over every parameter. Per entry the relative
/// error is |a - n| / max(|a|, |n|, 1e-4); the floor keeps entries that are
/// numerically zero from dividing by noise.
GradientCheckReport check_gradients(const Model& model, const Matrix& X, const TrainConfig& cfg,
                                    double h, double tol);

}  // namespace dclust
