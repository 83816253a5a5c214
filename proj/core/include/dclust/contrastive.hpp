#pragma once

#include "dclust/models.hpp"
#include "dclust/optim.hpp"
#include "dclust/rng.hpp"

#include <string>
#include <variant>

namespace dclust {

struct GaussianNoise {
  double sigma = 0.0;
};

/// One angle per call, uniform in [lo, hi], applied to the whole batch.
struct Rotation2d {
  double lo = 0.0;
  double hi = 0.0;
};

using Augmentation = std::variant<GaussianNoise, Rotation2d>;

void validate(const Augmentation& aug);

/// Parses `noise:SIGMA` or `rotation:LO:HI`.
Augmentation parse_augmentation(const std::string& text);
std::string to_string(const Augmentation& aug);

/// The contrastive critic: an MLP whose raw outputs are representations.
/// They are compared by cosine similarity and never pass through a softmax,
/// so they are not cluster probabilities.
struct Critic {
  MlpModel network;

  Eigen::Index output_dim() const { return network.W2.cols(); }
};

/// Weights and biases U(-b, b), b = scale or 1/sqrt(fan_in) when scale < 0.
Critic init_critic(Eigen::Index input_dim, Eigen::Index hidden, Eigen::Index clusters, Rng& rng,
                   double scale = -1.0);

Matrix augment(const Matrix& X, const Augmentation& aug, Rng& rng);

struct InfoNceResult {
  double loss = 0.0;
  Matrix dZ;  ///< d loss / d Z; Z_aug is treated as a constant
};

/// Cosine similarities S = normalize(Z) normalize(Z_aug)^T; each column is
/// softmaxed over its rows and the diagonal summed and negated:
/// loss = -sum_i softmax(S[:, i])_i. Throws DegenerateInputError on a
/// zero-norm row.
InfoNceResult info_nce_loss(const Matrix& Z, const Matrix& Z_aug);

/// Per-row argmax of the raw critic outputs, ties to the lowest index.
Labels extract_clusters(const Critic& critic, const Matrix& X);

struct ContrastiveReport {
  std::vector<double> history;  ///< loss before each step
  Critic critic;
  Labels labels;
  double elapsed_seconds = 0.0;
};

/// Per epoch: one augmentation draw, representations of X (with gradient)
/// and of the augmented batch (without), InfoNCE loss, one Adam step.
/// `cfg.epochs` may be 0, in which case the critic is returned untouched.
ContrastiveReport train_contrastive(Critic critic, const Matrix& X, const Augmentation& aug,
                                    const TrainConfig& cfg);

}  // namespace dclust
