#include "dclust/contrastive.hpp"

#include "dclust/error.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

namespace dclust {

namespace {

double parse_real(const std::string& text, const std::string& whole) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParameterError("cannot parse augmentation '" + whole + "'");
  }
  return value;
}

}  // namespace

void validate(const Augmentation& aug) {
  if (const auto* g = std::get_if<GaussianNoise>(&aug)) {
    if (!(g->sigma >= 0.0) || !std::isfinite(g->sigma)) {
      throw ParameterError("gaussian noise augmentation needs sigma >= 0");
    }
  } else if (const auto* r = std::get_if<Rotation2d>(&aug)) {
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || r->lo > r->hi) {
      throw ParameterError("rotation augmentation needs finite lo <= hi");
    }
  }
}

Augmentation parse_augmentation(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  Augmentation aug;
  if (parts.size() == 2 && parts[0] == "noise") {
    aug = GaussianNoise{parse_real(parts[1], text)};
  } else if (parts.size() == 3 && parts[0] == "rotation") {
    aug = Rotation2d{parse_real(parts[1], text), parse_real(parts[2], text)};
  } else {
    throw ParameterError("augmentation must be 'noise:SIGMA' or 'rotation:LO:HI', got '" + text + "'");
  }
  validate(aug);
  return aug;
}

std::string to_string(const Augmentation& aug) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* g = std::get_if<GaussianNoise>(&aug)) {
    os << "noise:" << g->sigma;
  } else if (const auto* r = std::get_if<Rotation2d>(&aug)) {
    os << "rotation:" << r->lo << ':' << r->hi;
  }
  return os.str();
}

Critic init_critic(Eigen::Index input_dim, Eigen::Index hidden, Eigen::Index clusters, Rng& rng,
                   double scale) {
  if (input_dim < 1 || hidden < 1 || clusters < 1) {
    throw ParameterError("init_critic: dimensions must be positive");
  }
  // Standard dense-layer init: weights and biases U(-b, b) with b = 1/sqrt(fan_in)
  // unless a scale is given. Non-zero hidden biases matter here: with zero
  // biases the network is positively homogeneous and, after the cosine
  // normalisation, blind to the norm of its input.
  auto layer = [&](Eigen::Index fan_in, Eigen::Index fan_out, Matrix& W, Vector& b) {
    const double bound = scale >= 0.0 ? scale : 1.0 / std::sqrt(static_cast<double>(fan_in));
    W.resize(fan_in, fan_out);
    for (Eigen::Index i = 0; i < fan_in; ++i) {
      for (Eigen::Index j = 0; j < fan_out; ++j) W(i, j) = rng.uniform(-bound, bound);
    }
    b.resize(fan_out);
    for (Eigen::Index j = 0; j < fan_out; ++j) b[j] = rng.uniform(-bound, bound);
  };
  Critic critic;
  layer(input_dim, hidden, critic.network.W1, critic.network.b1);
  layer(hidden, clusters, critic.network.W2, critic.network.b2);
  return critic;
}

Matrix augment(const Matrix& X, const Augmentation& aug, Rng& rng) {
  validate(aug);
  if (const auto* g = std::get_if<GaussianNoise>(&aug)) {
    Matrix out = X;
    if (g->sigma == 0.0) return out;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) += g->sigma * rng.normal();
    }
    return out;
  }
  const auto& r = std::get<Rotation2d>(aug);
  if (X.cols() != 2) {
    throw DimensionError("rotation augmentation requires 2-d data, got " + std::to_string(X.cols()) +
                         " columns");
  }
  const double theta = rng.uniform(r.lo, r.hi);
  Eigen::Matrix2d R;
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  // Row vectors: x' = R x  <=>  X' = X R^T
  return X * R.transpose();
}

InfoNceResult info_nce_loss(const Matrix& Z, const Matrix& Z_aug) {
  if (Z.rows() != Z_aug.rows() || Z.cols() != Z_aug.cols()) {
    throw DimensionError("info_nce_loss: representation shapes differ");
  }
  const Eigen::Index n = Z.rows();
  const Vector norms = Z.rowwise().norm();
  const Vector norms_aug = Z_aug.rowwise().norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(norms[i] > 0.0) || !(norms_aug[i] > 0.0)) {
      throw DegenerateInputError("info_nce_loss: representation row " + std::to_string(i) +
                                 " has zero norm");
    }
  }
  const Matrix Zn = norms.cwiseInverse().asDiagonal() * Z;
  const Matrix Wn = norms_aug.cwiseInverse().asDiagonal() * Z_aug;

  // One n x n buffer: similarities, then the column softmax, then the
  // gradient with respect to the similarities.
  Matrix M = Zn * Wn.transpose();
  Vector diag(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = M.col(j);
    const double mx = col.maxCoeff();
    col = (col.array() - mx).exp();
    col /= col.sum();
    diag[j] = col[j];
  }

  InfoNceResult out;
  out.loss = -diag.sum();

  // d(-A_jj)/dS_lj = -A_jj (delta_lj - A_lj)
  for (Eigen::Index j = 0; j < n; ++j) {
    M.col(j) *= diag[j];
    M(j, j) -= diag[j];
  }
  const Matrix dZn = M * Wn;
  // Through the row normalisation: dz = (dzn - zn (zn . dzn)) / ||z||
  const Vector radial = (Zn.array() * dZn.array()).rowwise().sum();
  out.dZ = norms.cwiseInverse().asDiagonal() * (dZn - radial.asDiagonal() * Zn);
  return out;
}

Labels extract_clusters(const Critic& critic, const Matrix& X) {
  return argmax_rows(logits(Model{critic.network}, X));
}

ContrastiveReport train_contrastive(Critic critic, const Matrix& X, const Augmentation& aug,
                                    const TrainConfig& cfg) {
  validate(aug);
  if (cfg.epochs < 0) throw ParameterError("epochs must be non-negative");
  if (!(cfg.learning_rate > 0.0)) throw ParameterError("learning rate must be positive");
  const auto start = std::chrono::steady_clock::now();

  Rng rng(cfg.seed);
  Model model{std::move(critic.network)};
  Vector theta = get_params(model);
  Optimizer optimizer(theta.size(), cfg);

  ContrastiveReport report;
  report.history.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const Matrix X_aug = augment(X, aug, rng);
    const Matrix Z = logits(model, X);
    const Matrix Z_aug = logits(model, X_aug);  // constant: no gradient through this branch
    const InfoNceResult nce = info_nce_loss(Z, Z_aug);
    if (!std::isfinite(nce.loss) || !nce.dZ.allFinite()) {
      throw NumericError("train_contrastive: loss became non-finite at epoch " + std::to_string(epoch));
    }
    report.history.push_back(nce.loss);
    optimizer.step(theta, backward_logits(model, X, nce.dZ));
    set_params(model, theta);
  }
  report.critic = Critic{std::get<MlpModel>(std::move(model))};
  report.labels = extract_clusters(report.critic, X);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dclust
