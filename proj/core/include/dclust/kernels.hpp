#pragma once

#include "dclust/types.hpp"

#include <optional>
#include <string>

namespace dclust {

enum class KernelKind { linear, rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  double gamma = 1.0;  ///< rbf bandwidth, exp(-gamma * ||x - y||^2)

  static KernelSpec linear() { return {KernelKind::linear, 0.0}; }
  static KernelSpec rbf(double gamma) { return {KernelKind::rbf, gamma}; }

  /// Throws ParameterError for an rbf spec with gamma <= 0 or non-finite.
  void validate() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

struct KernelMatrix {
  Matrix values;
  KernelSpec spec;
};

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// ||x_i - y_j||^2 through the norm expansion, clamped at zero.
Matrix pairwise_sq_dist(const Matrix& X, const Matrix& Y);

KernelMatrix gram(const Matrix& X, const Matrix& Y, const KernelSpec& spec);

/// 1 / (d * Var(X)) where Var pools every entry of X. Used whenever an rbf
/// kernel is requested without an explicit gamma.
double default_gamma(const Matrix& X);

/// Fills in the default gamma for an rbf kernel whose gamma was left unset.
KernelSpec resolve_kernel(KernelKind kind, std::optional<double> gamma, const Matrix& X);

}  // namespace dclust
