#include "qkprog/qkrls/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qkprog::qkrls {

namespace {

// Schur complements below this are treated as a singular bordered system.
constexpr double kMinPivot = 1e-10;
// Reciprocal condition estimate below which batch_solve refuses to answer.
constexpr double kMinRcond = 1e-14;

}  // namespace

void ModelParams::validate() const {
  kernel.validate();
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument("regularization alpha must be >= 0, got " + std::to_string(alpha));
  }
  if (!std::isfinite(eps_u) || eps_u < 0.0) {
    throw std::invalid_argument("quantization size eps_u must be >= 0, got " + std::to_string(eps_u));
  }
}

QkrlsModel::QkrlsModel(std::size_t input_dim, std::size_t output_dim, const ModelParams& params)
    : params_(params), codebook_(input_dim, output_dim, params.eps_u) {
  params_.validate();
  beta_.resize(0, static_cast<Eigen::Index>(output_dim));
}

Eigen::MatrixXd QkrlsModel::gram() const {
  const auto n = static_cast<Eigen::Index>(size());
  return gram_.topLeftCorner(n, n);
}

void QkrlsModel::grow_storage(std::size_t needed) {
  const auto capacity = static_cast<std::size_t>(gram_.rows());
  if (needed <= capacity) {
    return;
  }
  const auto live = static_cast<Eigen::Index>(size());
  const auto grown = static_cast<Eigen::Index>(std::max<std::size_t>({needed, 2 * capacity, 16}));
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(grown, grown);
  Eigen::MatrixXd inverse = Eigen::MatrixXd::Zero(grown, grown);
  gram.topLeftCorner(live, live) = gram_.topLeftCorner(live, live);
  inverse.topLeftCorner(live, live) = inverse_.topLeftCorner(live, live);
  gram_.swap(gram);
  inverse_.swap(inverse);
}

Codebook::Assignment QkrlsModel::update(const Eigen::Ref<const Eigen::VectorXd>& x,
                                        const Eigen::Ref<const Eigen::VectorXd>& d) {
  if (static_cast<std::size_t>(d.size()) != output_dim()) {
    throw std::invalid_argument("update: target has dimension " + std::to_string(d.size()) +
                                ", expected " + std::to_string(output_dim()));
  }
  const double alpha = params_.alpha;
  const auto m = static_cast<Eigen::Index>(size());

  if (m > 0) {
    const Codebook::Nearest near = codebook_.nearest(x);
    if (std::sqrt(near.squared_distance) <= codebook_.eps_u()) {
      // A(n, n) moves from alpha / M to alpha / (M + 1).
      const auto n = static_cast<Eigen::Index>(near.index);
      const double count = static_cast<double>(codebook_.counts()[near.index]);
      const double delta = alpha / (count + 1.0) - alpha / count;
      if (delta != 0.0) {
        auto inv = inverse_.topLeftCorner(m, m);
        const Eigen::VectorXd col = inv.col(n);
        const double denom = 1.0 + delta * col(n);
        inv.noalias() -= (col * col.transpose()) * (delta / denom);
      }
      const Codebook::Assignment assigned = codebook_.quantize(x);
      codebook_.accumulate(assigned.index, d);
      refresh_beta();
      return assigned;
    }
  }

  // New center: border A with b = k(c_i, x) and corner 1 + alpha.
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i) = gaussian_from_squared_distance((x - codebook_.center(static_cast<std::size_t>(i))).squaredNorm(),
                                          params_.kernel.sigma);
  }
  const double corner = 1.0 + alpha;
  Eigen::VectorXd z;
  double schur = corner;
  if (m > 0) {
    z.noalias() = inverse_.topLeftCorner(m, m) * b;
    schur = corner - b.dot(z);
  }
  if (!std::isfinite(schur) || schur <= kMinPivot) {
    throw IllConditionedError("update: kernel system is singular (Schur complement " +
                              std::to_string(schur) + "); use alpha > 0 or a larger eps_u");
  }

  grow_storage(static_cast<std::size_t>(m) + 1);
  const Codebook::Assignment assigned = codebook_.quantize(x);
  codebook_.accumulate(assigned.index, d);

  gram_.row(m).head(m) = b.transpose();
  gram_.col(m).head(m) = b;
  gram_(m, m) = 1.0;

  auto inv = inverse_.topLeftCorner(m + 1, m + 1);
  if (m > 0) {
    inv.topLeftCorner(m, m).noalias() += (z * z.transpose()) / schur;
    inv.col(m).head(m) = -z / schur;
    inv.row(m).head(m) = -z.transpose() / schur;
  }
  inv(m, m) = 1.0 / schur;

  refresh_beta();
  return assigned;
}

void QkrlsModel::refresh_beta() {
  const auto n = static_cast<Eigen::Index>(size());
  const auto s = static_cast<Eigen::Index>(output_dim());
  Eigen::MatrixXd mean_targets(n, s);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    mean_targets.row(i) = codebook_.dbar(idx).transpose() / static_cast<double>(codebook_.counts()[idx]);
  }
  beta_.noalias() = inverse_.topLeftCorner(n, n) * mean_targets;
}

Eigen::VectorXd QkrlsModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (empty()) {
    throw std::logic_error("untrained predictor");
  }
  if (static_cast<std::size_t>(x.size()) != input_dim()) {
    throw std::invalid_argument("predict: input has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(input_dim()));
  }
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::VectorXd weights(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    weights(i) = gaussian_from_squared_distance(
        (x - codebook_.center(static_cast<std::size_t>(i))).squaredNorm(), params_.kernel.sigma);
  }
  return beta_.transpose() * weights;
}

std::size_t QkrlsModel::assign_state(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (empty()) {
    throw std::logic_error("untrained predictor");
  }
  return codebook_.nearest(x).index;
}

QkrlsModel QkrlsModel::restore(const ModelParams& params, Codebook codebook, Eigen::MatrixXd beta) {
  params.validate();
  if (codebook.eps_u() != params.eps_u) {
    throw std::invalid_argument("restore: codebook eps_u differs from model parameters");
  }
  const auto n = static_cast<Eigen::Index>(codebook.size());
  if (beta.rows() != n || beta.cols() != static_cast<Eigen::Index>(codebook.output_dim())) {
    throw std::invalid_argument("restore: beta must be " + std::to_string(n) + " x " +
                                std::to_string(codebook.output_dim()));
  }
  QkrlsModel model;
  model.params_ = params;
  // Storage first: grow_storage copies the live block, which is still empty here.
  model.grow_storage(static_cast<std::size_t>(n));
  model.codebook_ = std::move(codebook);

  Eigen::MatrixXd system(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    model.gram_(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double value = gaussian_kernel(model.codebook_.center(static_cast<std::size_t>(i)),
                                           model.codebook_.center(static_cast<std::size_t>(j)),
                                           params.kernel);
      model.gram_(i, j) = value;
      model.gram_(j, i) = value;
    }
  }
  system = model.gram_.topLeftCorner(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    system(i, i) += params.alpha / static_cast<double>(model.codebook_.counts()[static_cast<std::size_t>(i)]);
  }
  if (n > 0) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    if (!(lu.rcond() > kMinRcond)) {
      throw IllConditionedError("restore: kernel system is singular");
    }
    Eigen::MatrixXd inverse = lu.inverse();
    // Keep the cached inverse exactly symmetric like the incremental path.
    model.inverse_.topLeftCorner(n, n) = 0.5 * (inverse + inverse.transpose());
  }
  model.beta_ = std::move(beta);
  return model;
}

Eigen::MatrixXd batch_solve(const Codebook& codebook, double alpha, const KernelParams& kernel) {
  kernel.validate();
  if (codebook.empty()) {
    throw std::invalid_argument("batch_solve: codebook is empty");
  }
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument("batch_solve: alpha must be >= 0");
  }
  const auto n = static_cast<Eigen::Index>(codebook.size());
  const auto s = static_cast<Eigen::Index>(codebook.output_dim());

  Eigen::MatrixXd system(n, n);
  Eigen::MatrixXd rhs(n, s);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double count = static_cast<double>(codebook.counts()[ii]);
    for (Eigen::Index j = 0; j < n; ++j) {
      system(i, j) = count * gaussian_kernel(codebook.center(ii), codebook.center(static_cast<std::size_t>(j)), kernel);
    }
    system(i, i) += alpha;
    rhs.row(i) = codebook.dbar(ii).transpose();
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  if (!(lu.rcond() > kMinRcond)) {
    throw IllConditionedError("batch_solve: system is ill-conditioned (rcond " +
                              std::to_string(lu.rcond()) + ")");
  }
  return lu.solve(rhs);
}

}  // namespace qkprog::qkrls
