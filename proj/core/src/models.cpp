#include "dclust/models.hpp"

#include "dclust/error.hpp"

#include <cmath>

namespace dclust {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};


void check_input(const Matrix& X, Eigen::Index expected_dim, const char* what) {
  if (X.cols() != expected_dim) {
    throw DimensionError(std::string(what) + ": input has " + std::to_string(X.cols()) +
                         " features, model expects " + std::to_string(expected_dim));
  }
}

void check_bound(const NonparametricModel& m, const Matrix& X) {
  if (X.rows() != m.L.rows() || fingerprint(X) != m.fingerprint) {
    throw ParameterError(
        "nonparametric model applied to data other than its training set; the model does not "
        "generalise to unseen samples");
  }
}

// Appends a matrix in row-major order.
void pack(Vector& out, Eigen::Index& at, const Matrix& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) out[at++] = M(i, j);
  }
}
void pack(Vector& out, Eigen::Index& at, const Vector& v) {
  out.segment(at, v.size()) = v;
  at += v.size();
}
void unpack(const Vector& in, Eigen::Index& at, Matrix& M) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = in[at++];
  }
}
void unpack(const Vector& in, Eigen::Index& at, Vector& v) {
  v = in.segment(at, v.size());
  at += v.size();
}

Matrix mlp_hidden_pre(const MlpModel& m, const Matrix& X) {
  Matrix H = X * m.W1;
  H.rowwise() += m.b1.transpose();
  return H;
}

Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  Matrix M(rows, cols);
  // Row-major fill so the stream order matches the flat parameter layout.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = scale * rng.normal();
  }
  return M;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::linear: return "linear";
    case ModelKind::kernel: return "kernel";
    case ModelKind::mlp: return "mlp";
    case ModelKind::nonparametric: return "nonparametric";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "linear") return ModelKind::linear;
  if (name == "kernel") return ModelKind::kernel;
  if (name == "mlp") return ModelKind::mlp;
  if (name == "nonparametric") return ModelKind::nonparametric;
  throw ParameterError("unknown model kind '" + name + "'");
}

ModelKind kind_of(const Model& model) {
  return static_cast<ModelKind>(model.index());
}

Eigen::Index num_clusters(const Model& model) {
  return std::visit(overloaded{
                        [](const LinearModel& m) { return m.W.cols(); },
                        [](const KernelModel& m) { return m.A.cols(); },
                        [](const MlpModel& m) { return m.W2.cols(); },
                        [](const NonparametricModel& m) { return m.L.cols(); },
                    },
                    model);
}

Eigen::Index num_params(const Model& model) {
  return std::visit(overloaded{
                        [](const LinearModel& m) { return m.W.size() + m.b.size(); },
                        [](const KernelModel& m) { return m.A.size() + m.b.size(); },
                        [](const MlpModel& m) {
                          return m.W1.size() + m.b1.size() + m.W2.size() + m.b2.size();
                        },
                        [](const NonparametricModel& m) { return m.L.size(); },
                    },
                    model);
}

bool generalises(const Model& model) {
  return !std::holds_alternative<NonparametricModel>(model);
}

std::uint64_t fingerprint(const Matrix& X) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t shape[2] = {X.rows(), X.cols()};
  mix(shape, sizeof(shape));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      double v = X(i, j);
      if (v == 0.0) v = 0.0;  // fold -0 into +0
      mix(&v, sizeof(v));
    }
  }
  return h;
}

Model init_model(ModelKind kind, const Matrix& X, const InitOptions& options, Rng& rng) {
  const Eigen::Index K = options.clusters;
  if (K < 1) throw ParameterError("init_model: number of clusters must be at least 1");
  if (X.rows() < 1 || X.cols() < 1) throw ParameterError("init_model: empty data");
  if (!(options.scale < 0.0) && !std::isfinite(options.scale)) {
    throw ParameterError("init_model: scale must be finite");
  }
  auto scale_for = [&](Eigen::Index fan_in) {
    return options.scale >= 0.0 ? options.scale : 1.0 / std::sqrt(static_cast<double>(fan_in));
  };

  switch (kind) {
    case ModelKind::linear: {
      LinearModel m;
      m.W = normal_matrix(X.cols(), K, scale_for(X.cols()), rng);
      m.b = Vector::Zero(K);
      return m;
    }
    case ModelKind::kernel: {
      options.kernel.validate();
      KernelModel m;
      m.reference = X;
      m.spec = options.kernel;
      // The n kernel features are all positive and strongly correlated, so a
      // 1/sqrt(n) draw already gives O(1) random logit surfaces. Starting near
      // uniform (1/n) lets MI ascent follow the leading kernel direction.
      const double scale =
          options.scale >= 0.0 ? options.scale : 1.0 / static_cast<double>(X.rows());
      m.A = normal_matrix(X.rows(), K, scale, rng);
      m.b = Vector::Zero(K);
      return m;
    }
    case ModelKind::mlp: {
      if (options.hidden < 1) throw ParameterError("init_model: hidden width must be at least 1");
      MlpModel m;
      m.W1 = normal_matrix(X.cols(), options.hidden, scale_for(X.cols()), rng);
      m.b1 = Vector::Zero(options.hidden);
      m.W2 = normal_matrix(options.hidden, K, scale_for(options.hidden), rng);
      m.b2 = Vector::Zero(K);
      return m;
    }
    case ModelKind::nonparametric: {
      NonparametricModel m;
      // Each row of logits feeds only its own softmax, so the fan-in is K.
      m.L = normal_matrix(X.rows(), K, scale_for(K), rng);
      m.fingerprint = fingerprint(X);
      return m;
    }
  }
  throw ParameterError("init_model: unknown model kind");
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix P = logits;
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    const double mx = P.row(i).maxCoeff();
    P.row(i) = (P.row(i).array() - mx).exp();
    P.row(i) /= P.row(i).sum();
  }
  return P;
}

Matrix logits(const Model& model, const Matrix& X) {
  return std::visit(
      overloaded{
          [&](const LinearModel& m) -> Matrix {
            check_input(X, m.W.rows(), "linear model");
            Matrix Z = X * m.W;
            Z.rowwise() += m.b.transpose();
            return Z;
          },
          [&](const KernelModel& m) -> Matrix {
            check_input(X, m.reference.cols(), "kernel model");
            Matrix Z = gram(X, m.reference, m.spec).values * m.A;
            Z.rowwise() += m.b.transpose();
            return Z;
          },
          [&](const MlpModel& m) -> Matrix {
            check_input(X, m.W1.rows(), "mlp model");
            Matrix Z = mlp_hidden_pre(m, X).cwiseMax(0.0) * m.W2;
            Z.rowwise() += m.b2.transpose();
            return Z;
          },
          [&](const NonparametricModel& m) -> Matrix {
            check_bound(m, X);
            return m.L;
          },
      },
      model);
}

Matrix forward(const Model& model, const Matrix& X) {
  return softmax_rows(logits(model, X));
}

Vector backward_logits(const Model& model, const Matrix& X, const Matrix& dlogits) {
  const Eigen::Index K = num_clusters(model);
  if (dlogits.rows() != X.rows() || dlogits.cols() != K) {
    throw DimensionError("backward: gradient shape " + std::to_string(dlogits.rows()) + "x" +
                         std::to_string(dlogits.cols()) + " does not match output " +
                         std::to_string(X.rows()) + "x" + std::to_string(K));
  }
  Vector grad(num_params(model));
  Eigen::Index at = 0;
  std::visit(overloaded{
                 [&](const LinearModel& m) {
                   check_input(X, m.W.rows(), "linear model");
                   pack(grad, at, Matrix(X.transpose() * dlogits));
                   pack(grad, at, Vector(dlogits.colwise().sum().transpose()));
                 },
                 [&](const KernelModel& m) {
                   check_input(X, m.reference.cols(), "kernel model");
                   const Matrix Kx = gram(X, m.reference, m.spec).values;
                   pack(grad, at, Matrix(Kx.transpose() * dlogits));
                   pack(grad, at, Vector(dlogits.colwise().sum().transpose()));
                 },
                 [&](const MlpModel& m) {
                   check_input(X, m.W1.rows(), "mlp model");
                   const Matrix pre = mlp_hidden_pre(m, X);
                   const Matrix hidden = pre.cwiseMax(0.0);
                   Matrix dhidden = dlogits * m.W2.transpose();
                   dhidden = (pre.array() > 0.0).select(dhidden, 0.0);
                   pack(grad, at, Matrix(X.transpose() * dhidden));
                   pack(grad, at, Vector(dhidden.colwise().sum().transpose()));
                   pack(grad, at, Matrix(hidden.transpose() * dlogits));
                   pack(grad, at, Vector(dlogits.colwise().sum().transpose()));
                 },
                 [&](const NonparametricModel& m) {
                   check_bound(m, X);
                   pack(grad, at, dlogits);
                 },
             },
             model);
  return grad;
}

Vector backward(const Model& model, const Matrix& X, const Matrix& dP) {
  if (!dP.allFinite()) throw NumericError("backward: dJ/dP contains non-finite entries");
  const Matrix P = forward(model, X);
  if (dP.rows() != P.rows() || dP.cols() != P.cols()) {
    throw DimensionError("backward: dJ/dP shape does not match the responsibilities");
  }
  // Softmax Jacobian: dJ/dz_ik = P_ik (dJ/dP_ik - sum_j P_ij dJ/dP_ij).
  const Vector inner = (P.array() * dP.array()).rowwise().sum();
  Matrix dlogits = P.array() * (dP.colwise() - inner).array();
  return backward_logits(model, X, dlogits);
}

Vector get_params(const Model& model) {
  Vector theta(num_params(model));
  Eigen::Index at = 0;
  std::visit(overloaded{
                 [&](const LinearModel& m) { pack(theta, at, m.W); pack(theta, at, m.b); },
                 [&](const KernelModel& m) { pack(theta, at, m.A); pack(theta, at, m.b); },
                 [&](const MlpModel& m) {
                   pack(theta, at, m.W1);
                   pack(theta, at, m.b1);
                   pack(theta, at, m.W2);
                   pack(theta, at, m.b2);
                 },
                 [&](const NonparametricModel& m) { pack(theta, at, m.L); },
             },
             model);
  return theta;
}

void set_params(Model& model, const Vector& theta) {
  if (theta.size() != num_params(model)) {
    throw DimensionError("set_params: expected " + std::to_string(num_params(model)) +
                         " parameters, got " + std::to_string(theta.size()));
  }
  Eigen::Index at = 0;
  std::visit(overloaded{
                 [&](LinearModel& m) { unpack(theta, at, m.W); unpack(theta, at, m.b); },
                 [&](KernelModel& m) { unpack(theta, at, m.A); unpack(theta, at, m.b); },
                 [&](MlpModel& m) {
                   unpack(theta, at, m.W1);
                   unpack(theta, at, m.b1);
                   unpack(theta, at, m.W2);
                   unpack(theta, at, m.b2);
                 },
                 [&](NonparametricModel& m) { unpack(theta, at, m.L); },
             },
             model);
}

Vector weight_mask(const Model& model) {
  Vector mask = Vector::Zero(num_params(model));
  std::visit(overloaded{
                 [&](const LinearModel& m) { mask.head(m.W.size()).setOnes(); },
                 [&](const KernelModel& m) { mask.head(m.A.size()).setOnes(); },
                 [&](const MlpModel& m) {
                   mask.head(m.W1.size()).setOnes();
                   mask.segment(m.W1.size() + m.b1.size(), m.W2.size()).setOnes();
                 },
                 [](const NonparametricModel&) {},
             },
             model);
  return mask;
}

}  // namespace dclust
