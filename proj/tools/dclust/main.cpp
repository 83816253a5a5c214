// dclust: generate data, fit discriminative clustering models and baselines,
// export decision-boundary grids, sweep configurations, train contrastive
// critics. Every run writes enough configuration to be repeated exactly.
//
// Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 I/O failure.

#include "runs.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dclust;
using namespace dclust::cli;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": cannot parse '" + s + "' as a number");
  }
}

std::vector<double> to_doubles(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(to_double(p, what));
  return out;
}

/// "2:6" (inclusive) or "2,3,4".
std::vector<long long> to_int_range(const std::string& s, const std::string& what) {
  std::vector<long long> out;
  if (const auto colon = s.find(':'); colon != std::string::npos) {
    const auto lo = static_cast<long long>(to_double(s.substr(0, colon), what));
    const auto hi = static_cast<long long>(to_double(s.substr(colon + 1), what));
    for (long long v = lo; v <= hi; ++v) out.push_back(v);
  } else {
    for (double v : to_doubles(s, what)) out.push_back(static_cast<long long>(v));
  }
  if (out.empty()) throw UsageError(what + ": empty range '" + s + "'");
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw IoError("failed while writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

DataMatrix load_data(const std::string& path) {
  DataMatrix D = read_csv(path);
  D.validate();
  return D;
}

void add_fit_options(CLI::App* cmd, FitSettings& s, bool single_k) {
  cmd->add_option("--model", s.model,
                  "kmeans | spectral | linear | kernel-rim | mlp | nonparametric")
      ->capture_default_str();
  cmd->add_option("--objective", s.objective,
                  "mi | rim | mmd-gemini (default: rim for linear and kernel-rim, mi otherwise)");
  cmd->add_option("--kernel", s.kernel,
                  "kernel of kernel-rim, mmd-gemini and the partition score; spectral affinity")
      ->capture_default_str();
  cmd->add_option("--gamma", s.gamma,
                  "rbf bandwidth (default: 1/(d*Var(X)); 1.0 for the spectral affinity)");
  cmd->add_option("--reg", s.reg, "l2 weight penalty of the rim objective")->capture_default_str();
  if (single_k) cmd->add_option("--k", s.k, "number of clusters")->capture_default_str();
  cmd->add_option("--n-init", s.n_init, "restarts of k-means (also on the spectral embedding)")
      ->capture_default_str();
  cmd->add_option("--hidden", s.hidden, "hidden width of the mlp")->capture_default_str();
  cmd->add_option("--epochs", s.epochs, "full-batch training steps")->capture_default_str();
  cmd->add_option("--lr", s.lr, "learning rate")->capture_default_str();
  cmd->add_option("--optimizer", s.optimizer, "adam | sgd")->capture_default_str();
  cmd->add_option("--scale", s.scale, "initial weight std (default depends on the model)");
  cmd->add_option("--seed", s.seed, "seed for initialisation, restarts and training")
      ->capture_default_str();
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string dataset;
  std::size_t n = 200;
  double noise = 0.05;
  double factor = 0.1;
  std::string means = "0,0;5,5;-5,5";
  std::string std = "0.3";
  std::string count = "50";
  std::uint64_t seed = 0;
  bool standardize = false;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  Rng rng(a.seed);
  DataMatrix D;
  if (a.dataset == "circles") {
    D = make_circles(a.n, a.noise, a.factor, rng);
  } else {
    const auto rows = split(a.means, ';');
    std::vector<std::vector<double>> centres;
    for (const auto& r : rows) centres.push_back(to_doubles(r, "--means"));
    if (centres.empty()) throw UsageError("--means: no centres given");
    const std::size_t d = centres.front().size();
    Matrix means(static_cast<Eigen::Index>(centres.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < centres.size(); ++i) {
      if (centres[i].size() != d) throw UsageError("--means: centres differ in dimension");
      for (std::size_t j = 0; j < d; ++j)
        means(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = centres[i][j];
    }
    auto stds = to_doubles(a.std, "--std");
    auto counts_raw = to_int_range(a.count, "--count");
    if (stds.size() == 1) stds.assign(centres.size(), stds.front());
    std::vector<std::size_t> counts;
    for (auto c : counts_raw) {
      if (c < 0) throw UsageError("--count must be non-negative");
      counts.push_back(static_cast<std::size_t>(c));
    }
    if (counts.size() == 1) counts.assign(centres.size(), counts.front());
    D = make_gaussian_blobs(means, stds, counts, rng);
  }
  if (a.standardize) D = standardize(D);
  write_csv(D, a.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  FitSettings settings;
  std::string data;
  std::string out;
  bool timing = false;
};

int cmd_fit(const FitArgs& a) {
  const DataMatrix D = load_data(a.data);
  const FitOutcome r = run_fit(a.settings, D.values);

  RunRecord rec;
  rec.command = "fit";
  rec.config = a.settings.echo();
  rec.config["data"] = a.data;
  rec.history = r.history;
  rec.labels = r.labels;
  rec.metrics = evaluate(r.labels, D, scoring_kernel(a.settings, D.values));
  if (r.final_objective) rec.values["final_objective"] = *r.final_objective;
  if (r.inertia) rec.values["inertia"] = *r.inertia;
  rec.values["used_clusters"] = used_clusters(r.proportions);
  rec.model_json = r.model_json;
  if (a.timing) rec.elapsed_seconds = r.elapsed_seconds;

  const fs::path out(a.out);
  ensure_dir(out);
  write_text(out / "report.json", report_to_json(rec) + "\n");
  write_labels_csv(r.labels, out / "labels.csv");
  write_history_csv(r.history, out / "history.csv");
  write_text(out / "model.json", r.model_json + "\n");

  std::cout << "fit " << a.settings.model;
  if (rec.metrics.ari) std::cout << " ari=" << format_double(*rec.metrics.ari);
  if (r.final_objective) std::cout << " objective=" << format_double(*r.final_objective);
  std::cout << " -> " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct BoundaryArgs {
  std::string model_file;
  std::string bounds = "-3,3,-3,3";
  int resolution = 100;
  std::string out;
};

int cmd_boundary(const BoundaryArgs& a) {
  const std::string text = read_text(a.model_file);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(a.model_file + ": " + e.what());
  }
  const std::string kind = doc.value("kind", "");
  if (kind == "spectral" || kind == "nonparametric")
    throw UsageError(kind + " model does not generalise to unseen samples; no boundary to export");

  const auto b = to_doubles(a.bounds, "--bounds");
  if (b.size() != 4 || !(b[0] < b[1]) || !(b[2] < b[3]))
    throw UsageError("--bounds expects x0min,x0max,x1min,x1max with min < max");
  if (a.resolution < 2) throw UsageError("--resolution must be at least 2");

  const Eigen::Index r = a.resolution;
  const Vector g0 = Vector::LinSpaced(r, b[0], b[1]);
  const Vector g1 = Vector::LinSpaced(r, b[2], b[3]);
  Matrix grid(r * r, 2);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) grid.row(i * r + j) << g0(i), g1(j);

  std::string header;
  Vector value(grid.rows());
  if (kind == "kmeans") {
    const auto rows = doc.at("centroids").get<std::vector<std::vector<double>>>();
    Matrix C(static_cast<Eigen::Index>(rows.size()), 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != 2) throw UsageError("boundary grids need 2-d models");
      C.row(static_cast<Eigen::Index>(i)) << rows[i][0], rows[i][1];
    }
    const Labels l = assign_to_centroids(grid, C);
    header = "x0,x1,p_cluster2";
    for (Eigen::Index i = 0; i < grid.rows(); ++i) value(i) = l[static_cast<std::size_t>(i)] == 1;
  } else {
    const Model model = model_from_json(text);
    if (doc.value("critic", false)) {
      // Raw critic outputs are not probabilities; report the winning index.
      const Labels l = extract_clusters(Critic{std::get<MlpModel>(model)}, grid);
      header = "x0,x1,argmax_value";
      for (Eigen::Index i = 0; i < grid.rows(); ++i) value(i) = l[static_cast<std::size_t>(i)];
    } else {
      const Matrix P = forward(model, grid);
      header = "x0,x1,p_cluster2";
      value = P.cols() >= 2 ? Vector(P.col(1)) : Vector::Zero(grid.rows());
    }
  }

  std::ofstream os(a.out);
  if (!os) throw IoError("cannot open " + a.out + " for writing");
  os << header << "\n";
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    os << format_double(grid(i, 0)) << "," << format_double(grid(i, 1)) << ","
       << format_double(value(i)) << "\n";
  if (!os) throw IoError("failed while writing " + a.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  FitSettings base;
  std::string data;
  std::string ks = "2";
  std::string seeds = "0";
  std::vector<std::string> grid;
  std::string out;
};

const std::vector<std::string> kGridKeys = {"epochs", "gamma", "hidden", "lr", "reg", "scale"};

void apply(FitSettings& s, const std::string& key, double v) {
  if (key == "epochs") s.epochs = static_cast<int>(v);
  else if (key == "gamma") s.gamma = v;
  else if (key == "hidden") s.hidden = static_cast<int>(v);
  else if (key == "lr") s.lr = v;
  else if (key == "reg") s.reg = v;
  else if (key == "scale") s.scale = v;
}

int cmd_sweep(const SweepArgs& a) {
  // key -> values, keys sorted
  std::map<std::string, std::vector<double>> axes;
  for (const auto& item : a.grid) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--grid expects key=v1,v2,..., got '" + item + "'");
    const std::string key = item.substr(0, eq);
    if (std::find(kGridKeys.begin(), kGridKeys.end(), key) == kGridKeys.end())
      throw UsageError("--grid: unknown key '" + key + "' (epochs, gamma, hidden, lr, reg, scale)");
    const std::string values = item.substr(eq + 1);
    if (values.empty()) throw UsageError("--grid: no values for '" + key + "'");
    axes[key] = to_doubles(values, "--grid " + key);
  }
  const auto ks = to_int_range(a.ks, "--k");
  const auto seeds = to_int_range(a.seeds, "--seeds");
  a.base.validate();

  const DataMatrix D = load_data(a.data);

  // Cartesian product over the grid axes; each point sorted by (k, axes..., seed).
  std::vector<std::vector<double>> points{{}};
  for (const auto& [key, values] : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& p : points)
      for (double v : values) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }

  struct Row {
    std::vector<double> key;
    std::string line;
  };
  std::vector<Row> rows;
  for (long long k : ks) {
    for (const auto& point : points) {
      for (long long seed : seeds) {
        FitSettings s = a.base;
        s.k = static_cast<int>(k);
        s.seed = static_cast<std::uint64_t>(seed);
        std::size_t i = 0;
        for (const auto& [key, values] : axes) apply(s, key, point[i++]);
        const FitOutcome r = run_fit(s, D.values);
        const ReportMetrics m = evaluate(r.labels, D, scoring_kernel(s, D.values));

        auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
        std::ostringstream line;
        line << k;
        for (double v : point) line << "," << format_double(v);
        line << "," << seed << "," << opt(m.ari) << "," << opt(m.silhouette) << ","
             << opt(r.final_objective) << "," << used_clusters(r.proportions) << ","
             << opt(r.inertia);
        std::vector<double> key{static_cast<double>(k)};
        key.insert(key.end(), point.begin(), point.end());
        key.push_back(static_cast<double>(seed));
        rows.push_back({std::move(key), line.str()});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.key < y.key; });

  std::ofstream os(a.out);
  if (!os) throw IoError("cannot open " + a.out + " for writing");
  os << "k";
  for (const auto& [key, values] : axes) os << "," << key;
  os << ",seed,ari,silhouette,objective,used_clusters,inertia\n";
  for (const auto& r : rows) os << r.line << "\n";
  if (!os) throw IoError("failed while writing " + a.out);
  return 0;
}

// ---------------------------------------------------------------------------

struct ContrastiveArgs {
  std::string data;
  std::string aug = "rotation:0:6.2832";
  int hidden = 20;
  int k = 2;
  int epochs = 5000;
  double lr = 1e-4;
  std::uint64_t seed = 0;
  std::string out;
  bool timing = false;
};

int cmd_contrastive(const ContrastiveArgs& a) {
  const DataMatrix D = load_data(a.data);
  const Augmentation aug = parse_augmentation(a.aug);
  Rng init = Rng(a.seed).derive(1);
  const Critic critic = init_critic(D.cols(), a.hidden, a.k, init);
  TrainConfig cfg;
  cfg.epochs = a.epochs;
  cfg.learning_rate = a.lr;
  cfg.seed = a.seed;
  const ContrastiveReport r = train_contrastive(critic, D.values, aug, cfg);

  RunRecord rec;
  rec.command = "contrastive";
  rec.config = {{"aug", to_string(aug)},
                {"data", a.data},
                {"epochs", std::to_string(a.epochs)},
                {"hidden", std::to_string(a.hidden)},
                {"k", std::to_string(a.k)},
                {"lr", format_double(a.lr)},
                {"seed", std::to_string(a.seed)}};
  rec.history = r.history;
  rec.labels = r.labels;
  rec.metrics = evaluate(r.labels, D, resolve_kernel(KernelKind::rbf, std::nullopt, D.values));
  if (!r.history.empty()) rec.values["final_loss"] = r.history.back();
  auto model = nlohmann::ordered_json::parse(model_to_json(r.critic.network));
  model["critic"] = true;
  rec.model_json = model.dump();
  if (a.timing) rec.elapsed_seconds = r.elapsed_seconds;

  const fs::path out(a.out);
  ensure_dir(out);
  write_text(out / "report.json", report_to_json(rec) + "\n");
  write_labels_csv(r.labels, out / "labels.csv");
  write_history_csv(r.history, out / "history.csv");
  write_text(out / "model.json", *rec.model_json + "\n");

  std::cout << "contrastive " << to_string(aug);
  if (rec.metrics.ari) std::cout << " ari=" << format_double(*rec.metrics.ari);
  std::cout << " -> " << out.string() << "\n";
  return 0;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Replaces `--config FILE` with the file's `key = value` lines as
/// `--key=value` arguments, placed right after the subcommand so that flags
/// given on the command line win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string file;
    std::size_t consumed = 1;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      file = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      continue;
    }
    if (i < 2) throw UsageError("--config goes after the subcommand");
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config file " + file);
    std::vector<std::string> expanded;
    std::string line;
    for (int no = 1; std::getline(in, line); ++no) {
      line = trim(line);
      if (line.empty() || line[0] == '#' || line[0] == ';') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw UsageError(file + ":" + std::to_string(no) + ": expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      std::replace(key.begin(), key.end(), '_', '-');
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        value = value.substr(1, value.size() - 2);
      expanded.push_back("--" + key + "=" + value);
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
    args.insert(args.begin() + 2, expanded.begin(), expanded.end());
    break;
  }
  return args;
}

void add_config_option(CLI::App* cmd) {
  // Consumed by expand_config before parsing; listed here for --help.
  cmd->add_option("--config", "read options from a key = value file (flags override it)");
}

int fail(const char* what, int code) {
  std::cerr << "error: " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discriminative clustering toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dclust 0.1.0");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a synthetic dataset to CSV");
  add_config_option(generate);
  generate->add_option("dataset", gen.dataset, "circles | blobs")
      ->required()
      ->check(CLI::IsMember({"circles", "blobs"}));
  generate->add_option("--n", gen.n, "circles: number of samples")->capture_default_str();
  generate->add_option("--noise", gen.noise, "circles: Gaussian noise std")->capture_default_str();
  generate->add_option("--factor", gen.factor, "circles: inner radius")->capture_default_str();
  generate->add_option("--means", gen.means, "blobs: centres, e.g. \"0,0;5,5\"")->capture_default_str();
  generate->add_option("--std", gen.std, "blobs: one std, or one per centre")->capture_default_str();
  generate->add_option("--count", gen.count, "blobs: one count, or one per centre")->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_flag("--standardize", gen.standardize, "z-score every column");
  generate->add_option("--out", gen.out, "output CSV")->required();

  FitArgs fa;
  auto* fitc = app.add_subcommand("fit", "Fit one model and write report.json, labels, history, model");
  add_config_option(fitc);
  add_fit_options(fitc, fa.settings, true);
  fitc->add_option("--data", fa.data, "input CSV")->required();
  fitc->add_option("--out", fa.out, "output directory")->required();
  fitc->add_flag("--timing", fa.timing, "include wall-clock time in the report");

  BoundaryArgs ba;
  auto* boundary = app.add_subcommand("boundary", "Evaluate a saved 2-d model on a uniform grid");
  add_config_option(boundary);
  boundary->add_option("--model-file", ba.model_file, "model.json from fit or contrastive")->required();
  boundary->add_option("--bounds", ba.bounds, "x0min,x0max,x1min,x1max")->capture_default_str();
  boundary->add_option("--resolution", ba.resolution, "grid points per axis")->capture_default_str();
  boundary->add_option("--out", ba.out, "output CSV")->required();

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Fit over a grid of k, hyperparameters and seeds");
  add_config_option(sweep);
  add_fit_options(sweep, sa.base, false);
  sweep->add_option("--k", sa.ks, "cluster counts, e.g. 2:6 or 2,3,5")->capture_default_str();
  sweep->add_option("--seeds", sa.seeds, "seeds, e.g. 0:9")->capture_default_str();
  sweep->add_option("--grid", sa.grid, "key=v1,v2,... over epochs, gamma, hidden, lr, reg, scale")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep->add_option("--data", sa.data, "input CSV")->required();
  sweep->add_option("--out", sa.out, "output CSV")->required();

  ContrastiveArgs ca;
  auto* contrastive = app.add_subcommand("contrastive", "Train an InfoNCE critic");
  add_config_option(contrastive);
  contrastive->add_option("--data", ca.data, "input CSV")->required();
  contrastive->add_option("--aug", ca.aug, "rotation:LO:HI | noise:SIGMA")->capture_default_str();
  contrastive->add_option("--hidden", ca.hidden)->capture_default_str();
  contrastive->add_option("--k", ca.k, "output dimension of the critic")->capture_default_str();
  contrastive->add_option("--epochs", ca.epochs)->capture_default_str();
  contrastive->add_option("--lr", ca.lr)->capture_default_str();
  contrastive->add_option("--seed", ca.seed)->capture_default_str();
  contrastive->add_option("--out", ca.out, "output directory")->required();
  contrastive->add_flag("--timing", ca.timing, "include wall-clock time in the report");

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const UsageError& e) {
    return fail(e.what(), kExitUsage);
  } catch (const IoError& e) {
    return fail(e.what(), kExitIo);
  }
  std::reverse(args.begin(), args.end());
  args.pop_back();  // program name

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*fitc) return cmd_fit(fa);
    if (*boundary) return cmd_boundary(ba);
    if (*sweep) return cmd_sweep(sa);
    if (*contrastive) return cmd_contrastive(ca);
  } catch (const UsageError& e) {
    return fail(e.what(), kExitUsage);
  } catch (const IoError& e) {
    return fail(e.what(), kExitIo);
  } catch (const NumericError& e) {
    return fail(e.what(), kExitNumeric);
  } catch (const DegenerateInputError& e) {
    return fail(e.what(), kExitNumeric);
  } catch (const Error& e) {
    // ParameterError, DimensionError: the request itself is wrong.
    return fail(e.what(), kExitUsage);
  }
  return kExitUsage;
}
