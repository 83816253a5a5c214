#include "dclust/optim.hpp"

#include "dclust/error.hpp"

#include <chrono>
#include <cmath>

namespace dclust {

void TrainConfig::validate() const {
  if (epochs < 1) throw ParameterError("epochs must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ParameterError("learning rate must be positive");
  }
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) || !(adam_beta2 > 0.0 && adam_beta2 < 1.0)) {
    throw ParameterError("Adam betas must lie in (0, 1)");
  }
  if (!(adam_eps > 0.0)) throw ParameterError("Adam epsilon must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("rim lambda must be a finite non-negative number");
  }
  if (objective == ObjectiveKind::mmd_gemini && !kernel) {
    throw ParameterError("objective mmd-gemini requires a kernel (linear or rbf)");
  }
  if (gamma && !(*gamma > 0.0)) throw ParameterError("gamma must be positive");
}

Adam::Adam(Eigen::Index size, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(Vector::Zero(size)), v_(Vector::Zero(size)) {}

void Adam::step(Vector& theta, const Vector& grad) {
  if (grad.size() != theta.size() || grad.size() != m_.size()) {
    throw DimensionError("Adam::step: parameter and gradient sizes differ");
  }
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, t_);
  const double c2 = 1.0 - std::pow(beta2_, t_);
  theta.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::adam ? "adam" : "sgd";
}

OptimizerKind optimizer_kind_from_string(const std::string& name) {
  if (name == "adam") return OptimizerKind::adam;
  if (name == "sgd") return OptimizerKind::sgd;
  throw ParameterError("unknown optimizer '" + name + "' (expected adam or sgd)");
}

Optimizer::Optimizer(Eigen::Index size, const TrainConfig& cfg)
    : kind_(cfg.optimizer),
      lr_(cfg.learning_rate),
      adam_(kind_ == OptimizerKind::adam ? size : 0, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2,
            cfg.adam_eps) {}

void Optimizer::step(Vector& theta, const Vector& grad) {
  if (kind_ == OptimizerKind::adam) {
    adam_.step(theta, grad);
  } else {
    if (grad.size() != theta.size()) throw DimensionError("sgd step: parameter and gradient sizes differ");
    theta -= lr_ * grad;
  }
}

ObjectiveFunction::ObjectiveFunction(const Matrix& X, const TrainConfig& cfg)
    : X_(X), kind_(cfg.objective), lambda_(cfg.lambda) {
  if (kind_ == ObjectiveKind::mmd_gemini) {
    if (!cfg.kernel) throw ParameterError("objective mmd-gemini requires a kernel (linear or rbf)");
    kernel_ = gram(X, X, resolve_kernel(*cfg.kernel, cfg.gamma, X));
  }
}

double ObjectiveFunction::evaluate(const Model& model, Vector* grad) const {
  // A kernel model is a linear model over kappa(X, reference); with the
  // features cached, both passes skip the Gram computation. The flat
  // parameter layouts of the two models coincide.
  if (const auto* km = std::get_if<KernelModel>(&model)) {
    if (!features_ || features_ref_ != km->reference.data()) {
      features_ = gram(X_, km->reference, km->spec).values;
      features_ref_ = km->reference.data();
    }
    const Model surrogate = LinearModel{km->A, km->b};
    return evaluate_on(surrogate, *features_, model, grad);
  }
  return evaluate_on(model, X_, model, grad);
}

double ObjectiveFunction::evaluate_on(const Model& model, const Matrix& inputs, const Model& original,
                                      Vector* grad) const {
  const Matrix P = forward(model, inputs);
  ObjectiveValue obj;
  switch (kind_) {
    case ObjectiveKind::mi:
      obj = mutual_information(P);
      break;
    case ObjectiveKind::rim: {
      const Vector penalized = get_params(original).cwiseProduct(weight_mask(original));
      obj = regularized_mi(P, penalized, lambda_);
      break;
    }
    case ObjectiveKind::mmd_gemini:
      obj = mmd_gemini_ova(P, *kernel_);
      break;
  }
  if (grad) {
    *grad = backward(model, inputs, obj.dP);
    if (obj.dparams_extra) *grad += *obj.dparams_extra;
  }
  return obj.value;
}

Labels argmax_rows(const Matrix& M) {
  Labels labels(static_cast<std::size_t>(M.rows()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < M.cols(); ++k) {
      if (M(i, k) > M(i, best)) best = k;
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return labels;
}

Labels predict(const Model& model, const Matrix& X) {
  return argmax_rows(forward(model, X));
}

FitReport fit(Model model, const Matrix& X, const TrainConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const ObjectiveFunction objective(X, cfg);

  Vector theta = get_params(model);
  Optimizer optimizer(theta.size(), cfg);
  FitReport report;
  report.history.reserve(static_cast<std::size_t>(cfg.epochs));
  Vector grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double value = objective.evaluate(model, &grad);
    if (!std::isfinite(value) || !grad.allFinite()) {
      throw NumericError("fit: objective " + to_string(cfg.objective) + " became non-finite at epoch " +
                         std::to_string(epoch) + " (value " + std::to_string(value) + ")");
    }
    report.history.push_back(value);
    // Ascent on the objective is descent on its negation.
    optimizer.step(theta, -grad);
    set_params(model, theta);
  }
  report.final_objective = objective.evaluate(model, nullptr);
  report.labels = predict(model, X);
  report.final_model = std::move(model);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

GradientCheckReport check_gradients(const Model& model, const Matrix& X, const TrainConfig& cfg,
                                    double h, double tol) {
  const ObjectiveFunction objective(X, cfg);
  Vector analytic;
  objective.evaluate(model, &analytic);

  Model probe = model;
  Vector theta = get_params(model);
  GradientCheckReport report;
  for (Eigen::Index p = 0; p < theta.size(); ++p) {
    const double saved = theta[p];
    theta[p] = saved + h;
    set_params(probe, theta);
    const double plus = objective.evaluate(probe, nullptr);
    theta[p] = saved - h;
    set_params(probe, theta);
    const double minus = objective.evaluate(probe, nullptr);
    theta[p] = saved;

    const double numeric = (plus - minus) / (2.0 * h);
    const double a = analytic[p];
    const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-4});
    report.max_abs_analytic = std::max(report.max_abs_analytic, std::abs(a));
    report.max_abs_numeric = std::max(report.max_abs_numeric, std::abs(numeric));
    if (rel > report.max_rel_error || report.worst_index < 0) {
      report.max_rel_error = rel;
      report.worst_index = p;
    }
  }
  report.passed = report.max_rel_error < tol;
  return report;
}

}  // namespace dclust
