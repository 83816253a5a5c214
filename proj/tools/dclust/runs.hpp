#pragma once

#include "dclust/dclust.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace dclust::cli {

/// Bad flag combination or a request the tool refuses; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything `fit` and `sweep` need to run one configuration.
struct FitSettings {
  std::string model = "kmeans";
  std::string objective;  ///< empty: model default (rim for linear and kernel-rim, mi otherwise)
  std::string kernel = "rbf";
  std::optional<double> gamma;
  double reg = 0.1;
  int k = 2;
  int n_init = 10;
  int hidden = 20;
  int epochs = 1000;
  double lr = 1e-3;
  std::string optimizer = "adam";
  std::optional<double> scale;
  std::uint64_t seed = 0;

  /// Objective id after defaults, or empty for the baselines.
  std::string resolved_objective() const;

  /// Throws UsageError on unknown ids and incompatible combinations.
  void validate() const;

  /// Flat string echo of every field, enough to reproduce the run.
  std::map<std::string, std::string> echo() const;
};

struct FitOutcome {
  Labels labels;
  std::vector<double> history;
  std::optional<double> final_objective;
  std::optional<double> inertia;
  Vector proportions;  ///< soft for trained models, hard for baselines
  std::string model_json;
  double elapsed_seconds = 0.0;
};

/// Dispatches to the baselines or to init_model + fit. Model init and the
/// baselines draw from Rng(seed).derive(1); the training loop gets `seed`.
FitOutcome run_fit(const FitSettings& s, const Matrix& X);

/// ARI against ground truth when present, Euclidean silhouette when at least
/// two clusters are used, kernel k-means score under `kernel`.
ReportMetrics evaluate(const Labels& labels, const DataMatrix& data, const KernelSpec& kernel);

/// Clusters with proportion above 1/(10K).
int used_clusters(const Vector& proportions);

/// The kernel used for scoring: the requested kind with gamma defaulted on X.
KernelSpec scoring_kernel(const FitSettings& s, const Matrix& X);

}  // namespace dclust::cli
