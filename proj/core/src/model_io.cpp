#include "dclust/model_io.hpp"

#include "dclust/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dclust {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = n ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
  Matrix M(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != d) throw IoError("model JSON: ragged matrix");
    for (Eigen::Index j = 0; j < d; ++j) M(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return M;
}

}  // namespace

std::string model_to_json(const Model& model) {
  json doc;
  doc["kind"] = to_string(kind_of(model));
  const Vector theta = get_params(model);
  doc["params"] = std::vector<double>(theta.data(), theta.data() + theta.size());

  if (const auto* m = std::get_if<LinearModel>(&model)) {
    doc["dims"] = {{"input", m->W.rows()}, {"clusters", m->W.cols()}};
  } else if (const auto* m = std::get_if<KernelModel>(&model)) {
    doc["dims"] = {{"input", m->reference.cols()},
                   {"reference", m->reference.rows()},
                   {"clusters", m->A.cols()}};
    doc["kernel"] = {{"kind", to_string(m->spec.kind)}, {"gamma", m->spec.gamma}};
    doc["reference"] = matrix_to_json(m->reference);
  } else if (const auto* m = std::get_if<MlpModel>(&model)) {
    doc["dims"] = {{"input", m->W1.rows()}, {"hidden", m->W1.cols()}, {"clusters", m->W2.cols()}};
  } else if (const auto* m = std::get_if<NonparametricModel>(&model)) {
    doc["dims"] = {{"samples", m->L.rows()}, {"clusters", m->L.cols()}};
    doc["fingerprint"] = m->fingerprint;
  }
  return doc.dump(2);
}

Model model_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    const ModelKind kind = model_kind_from_string(doc.at("kind").get<std::string>());
    const auto& dims = doc.at("dims");
    const auto K = dims.at("clusters").get<Eigen::Index>();
    Model model;
    switch (kind) {
      case ModelKind::linear: {
        const auto d = dims.at("input").get<Eigen::Index>();
        model = LinearModel{Matrix(d, K), Vector(K)};
        break;
      }
      case ModelKind::kernel: {
        KernelModel m;
        m.reference = matrix_from_json(doc.at("reference"));
        if (m.reference.rows() != dims.at("reference").get<Eigen::Index>() ||
            m.reference.cols() != dims.at("input").get<Eigen::Index>()) {
          throw IoError("model JSON: reference set shape disagrees with dims");
        }
        m.spec.kind = kernel_kind_from_string(doc.at("kernel").at("kind").get<std::string>());
        m.spec.gamma = doc.at("kernel").at("gamma").get<double>();
        m.A.resize(m.reference.rows(), K);
        m.b.resize(K);
        model = std::move(m);
        break;
      }
      case ModelKind::mlp: {
        const auto d = dims.at("input").get<Eigen::Index>();
        const auto H = dims.at("hidden").get<Eigen::Index>();
        model = MlpModel{Matrix(d, H), Vector(H), Matrix(H, K), Vector(K)};
        break;
      }
      case ModelKind::nonparametric: {
        const auto n = dims.at("samples").get<Eigen::Index>();
        model = NonparametricModel{Matrix(n, K), doc.at("fingerprint").get<std::uint64_t>()};
        break;
      }
    }
    const auto params = doc.at("params").get<std::vector<double>>();
    set_params(model, Eigen::Map<const Vector>(params.data(), static_cast<Eigen::Index>(params.size())));
    return model;
  } catch (const json::exception& e) {
    throw IoError(std::string("model JSON: ") + e.what());
  } catch (const DimensionError& e) {
    throw IoError(std::string("model JSON: ") + e.what());
  } catch (const ParameterError& e) {
    throw IoError(std::string("model JSON: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << model_to_json(model) << '\n';
  if (!os) throw IoError("failed while writing " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace dclust
