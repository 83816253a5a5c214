#include "runs.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "json.hpp"

namespace dclust::cli {

namespace {

const std::vector<std::string> kModels = {"kmeans", "spectral", "linear", "kernel-rim", "mlp",
                                          "nonparametric"};

bool is_baseline(const std::string& model) { return model == "kmeans" || model == "spectral"; }

ModelKind trained_kind(const std::string& model) {
  if (model == "kernel-rim") return ModelKind::kernel;
  return model_kind_from_string(model);
}

Vector hard_proportions(const Labels& labels, int K) {
  Vector p = Vector::Zero(K);
  for (int l : labels) p[l] += 1.0;
  return p / static_cast<double>(labels.size());
}

// Relabel to 0..m-1 in order of first appearance so that empty clusters
// drop out of partition scores.
Partition compact(const Labels& labels) {
  std::map<int, int> ids;
  Partition part;
  part.labels.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = ids.try_emplace(l, static_cast<int>(ids.size()));
    part.labels.push_back(it->second);
  }
  part.clusters = static_cast<int>(ids.size());
  return part;
}

}  // namespace

std::string FitSettings::resolved_objective() const {
  if (is_baseline(model)) return {};
  if (!objective.empty()) return objective;
  return model == "linear" || model == "kernel-rim" ? "rim" : "mi";
}

void FitSettings::validate() const {
  if (std::find(kModels.begin(), kModels.end(), model) == kModels.end())
    throw UsageError("unknown model '" + model +
                     "' (expected kmeans, spectral, linear, kernel-rim, mlp or nonparametric)");
  if (is_baseline(model) && !objective.empty())
    throw UsageError(model + " is not trained on an objective; drop --objective");
  if (!objective.empty() && objective != "mi" && objective != "rim" && objective != "mmd-gemini")
    throw UsageError("unknown objective '" + objective + "' (expected mi, rim or mmd-gemini)");
  if (kernel != "linear" && kernel != "rbf")
    throw UsageError("unknown kernel '" + kernel + "' (expected linear or rbf)");
  if (optimizer != "adam" && optimizer != "sgd")
    throw UsageError("unknown optimizer '" + optimizer + "' (expected adam or sgd)");
  if (k < 1) throw UsageError("--k must be at least 1");
  if (gamma && !(*gamma > 0.0)) throw UsageError("--gamma must be positive");
  if (model == "spectral" && kernel == "linear")
    throw UsageError("spectral clustering needs a non-negative affinity; use --kernel rbf");
}

std::map<std::string, std::string> FitSettings::echo() const {
  std::map<std::string, std::string> out{
      {"model", model},
      {"k", std::to_string(k)},
      {"seed", std::to_string(seed)},
  };
  if (model == "kmeans") {
    out["n_init"] = std::to_string(n_init);
    out["kernel"] = kernel;  // scoring only
  } else if (model == "spectral") {
    out["n_init"] = std::to_string(n_init);
    out["kernel"] = kernel;
    out["gamma"] = format_double(gamma.value_or(1.0));
  } else {
    out["objective"] = resolved_objective();
    out["kernel"] = kernel;
    if (gamma) out["gamma"] = format_double(*gamma);
    out["epochs"] = std::to_string(epochs);
    out["lr"] = format_double(lr);
    out["optimizer"] = optimizer;
    if (resolved_objective() == "rim") out["reg"] = format_double(reg);
    if (model == "mlp") out["hidden"] = std::to_string(hidden);
    if (scale) out["scale"] = format_double(*scale);
  }
  return out;
}

KernelSpec scoring_kernel(const FitSettings& s, const Matrix& X) {
  return resolve_kernel(kernel_kind_from_string(s.kernel), s.gamma, X);
}

FitOutcome run_fit(const FitSettings& s, const Matrix& X) {
  s.validate();
  FitOutcome out;
  Rng rng = Rng(s.seed).derive(1);
  const auto start = std::chrono::steady_clock::now();

  if (s.model == "kmeans") {
    KMeansOptions opt;
    opt.clusters = s.k;
    opt.n_init = s.n_init;
    const auto r = kmeans(X, opt, rng);
    out.labels = r.partition.labels;
    out.inertia = r.inertia;
    out.history = r.inertia_trace;
    nlohmann::ordered_json doc;
    doc["kind"] = "kmeans";
    doc["centroids"] = nlohmann::json::array();
    for (Eigen::Index i = 0; i < r.centroids.rows(); ++i) {
      std::vector<double> row(r.centroids.row(i).begin(), r.centroids.row(i).end());
      doc["centroids"].push_back(row);
    }
    out.model_json = doc.dump();
    out.proportions = hard_proportions(out.labels, s.k);
  } else if (s.model == "spectral") {
    // The default affinity bandwidth is fixed rather than data driven; see README.
    const auto r = spectral(X, s.k, KernelSpec::rbf(s.gamma.value_or(1.0)), rng, s.n_init);
    out.labels = r.partition.labels;
    out.model_json = R"({"kind":"spectral"})";
    out.proportions = hard_proportions(out.labels, s.k);
  } else {
    InitOptions init;
    init.clusters = s.k;
    init.hidden = s.hidden;
    if (s.scale) init.scale = *s.scale;
    if (s.model == "kernel-rim") init.kernel = scoring_kernel(s, X);
    Model model = init_model(trained_kind(s.model), X, init, rng);

    TrainConfig cfg;
    cfg.optimizer = optimizer_kind_from_string(s.optimizer);
    cfg.epochs = s.epochs;
    cfg.learning_rate = s.lr;
    cfg.seed = s.seed;
    cfg.objective = objective_kind_from_string(s.resolved_objective());
    cfg.lambda = s.reg;
    if (cfg.objective == ObjectiveKind::mmd_gemini) {
      cfg.kernel = kernel_kind_from_string(s.kernel);
      cfg.gamma = s.gamma;
    }
    auto r = fit(std::move(model), X, cfg);
    out.labels = std::move(r.labels);
    out.history = std::move(r.history);
    out.final_objective = r.final_objective;
    out.proportions = proportions(forward(r.final_model, X));
    out.model_json = model_to_json(r.final_model);
  }
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ReportMetrics evaluate(const Labels& labels, const DataMatrix& data, const KernelSpec& kernel) {
  ReportMetrics m;
  if (data.labels) m.ari = adjusted_rand_index(labels, *data.labels);
  const Partition part = compact(labels);
  if (part.clusters >= 2) m.silhouette = silhouette(data.values, labels).mean;
  m.kernel_kmeans_score = kernel_kmeans_score(part, gram(data.values, data.values, kernel));
  return m;
}

int used_clusters(const Vector& proportions) {
  const double floor = 1.0 / (10.0 * static_cast<double>(proportions.size()));
  return static_cast<int>((proportions.array() > floor).count());
}

}  // namespace dclust::cli
