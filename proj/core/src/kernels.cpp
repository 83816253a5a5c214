#include "dclust/kernels.hpp"

#include "dclust/error.hpp"

#include <cmath>

namespace dclust {

void KernelSpec::validate() const {
  if (kind == KernelKind::rbf && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw ParameterError("rbf kernel requires a finite gamma > 0");
  }
}

std::string to_string(KernelKind kind) {
  return kind == KernelKind::linear ? "linear" : "rbf";
}

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "rbf") return KernelKind::rbf;
  throw ParameterError("unknown kernel '" + name + "' (expected linear or rbf)");
}

Matrix pairwise_sq_dist(const Matrix& X, const Matrix& Y) {
  if (X.cols() != Y.cols()) {
    throw DimensionError("pairwise_sq_dist: feature dimensions differ (" +
                         std::to_string(X.cols()) + " vs " + std::to_string(Y.cols()) + ")");
  }
  const Vector x_sq = X.rowwise().squaredNorm();
  const Vector y_sq = Y.rowwise().squaredNorm();
  Matrix D = -2.0 * (X * Y.transpose());
  D.colwise() += x_sq;
  D.rowwise() += y_sq.transpose();
  D = D.cwiseMax(0.0);
  if (X.data() == Y.data() && X.rows() == Y.rows()) {
    // Self-distances: the expansion leaves rounding residue on the diagonal.
    D = 0.5 * (D + D.transpose()).eval();
    D.diagonal().setZero();
  }
  return D;
}

KernelMatrix gram(const Matrix& X, const Matrix& Y, const KernelSpec& spec) {
  spec.validate();
  if (X.cols() != Y.cols()) {
    throw DimensionError("gram: feature dimensions differ (" + std::to_string(X.cols()) + " vs " +
                         std::to_string(Y.cols()) + ")");
  }
  KernelMatrix out{.values = {}, .spec = spec};
  if (spec.kind == KernelKind::linear) {
    out.values = X * Y.transpose();
  } else {
    out.values = (-spec.gamma * pairwise_sq_dist(X, Y).array()).exp().matrix();
  }
  return out;
}

double default_gamma(const Matrix& X) {
  if (X.size() == 0) throw DegenerateInputError("default_gamma: empty data");
  const double mean = X.mean();
  const double var = (X.array() - mean).square().mean();
  if (!(var > 0.0)) throw DegenerateInputError("default_gamma: data has zero variance");
  return 1.0 / (static_cast<double>(X.cols()) * var);
}

KernelSpec resolve_kernel(KernelKind kind, std::optional<double> gamma, const Matrix& X) {
  if (kind == KernelKind::linear) return KernelSpec::linear();
  KernelSpec spec = KernelSpec::rbf(gamma ? *gamma : default_gamma(X));
  spec.validate();
  return spec;
}

}  // namespace dclust
