#ifndef QKPROG_QKRLS_MODEL_HPP
#define QKPROG_QKRLS_MODEL_HPP

#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

#include "qkprog/qkrls/codebook.hpp"
#include "qkprog/qkrls/kernel.hpp"

namespace qkprog::qkrls {

/// Raised when the regularized kernel system cannot be solved, which only
/// happens with alpha = 0 and (nearly) coincident centers.
class IllConditionedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelParams {
  KernelParams kernel;
  double alpha = 0.01;
  double eps_u = 0.3;

  void validate() const;
};

/// Quantized kernel recursive least squares regressor with vector output.
///
/// The weights always satisfy
///
///     beta = (Lambda * Psi + alpha * I)^-1 * dbar
///
/// where Psi is the Gram matrix of the codebook centers and Lambda the
/// diagonal of center counts. Since Lambda * Psi + alpha * I =
/// Lambda * (Psi + alpha * Lambda^-1), the model keeps the inverse of the
/// symmetric matrix A = Psi + alpha * Lambda^-1 and solves against the mean
/// target of each center. A merge changes one diagonal entry of A
/// (Sherman-Morrison); a new center borders A by one row and column (Schur
/// complement). Both cost O(n^2) per sample.
///
/// Not thread-safe for concurrent update; const members may be shared.
class QkrlsModel {
 public:
  QkrlsModel() = default;
  QkrlsModel(std::size_t input_dim, std::size_t output_dim, const ModelParams& params);

  std::size_t input_dim() const { return codebook_.input_dim(); }
  std::size_t output_dim() const { return codebook_.output_dim(); }
  const ModelParams& params() const { return params_; }
  const Codebook& codebook() const { return codebook_; }
  std::size_t size() const { return codebook_.size(); }
  bool empty() const { return codebook_.empty(); }

  /// n_L x s weight matrix, one column per output.
  const Eigen::MatrixXd& beta() const { return beta_; }

  /// n_L x n_L Gram matrix of the centers.
  Eigen::MatrixXd gram() const;

  /// Quantizes x, accumulates d and refreshes the weights.
  Codebook::Assignment update(const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& d);

  /// Kernel expansion sum_n beta_n * k(x, c_n). Throws std::logic_error
  /// ("untrained predictor") when the codebook is empty.
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Index of the region containing x (nearest center, smallest index on ties).
  std::size_t assign_state(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Rebuilds a model from a stored codebook and weights. The Gram matrix
  /// and the inverse are recomputed so that further updates remain exact.
  static QkrlsModel restore(const ModelParams& params, Codebook codebook, Eigen::MatrixXd beta);

 private:
  void grow_storage(std::size_t needed);
  void refresh_beta();

  ModelParams params_;
  Codebook codebook_;
  // Both hold capacity >= size(); only the leading size() x size() block is live.
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd inverse_;
  Eigen::MatrixXd beta_;
};

/// Direct dense solve of (Lambda * Psi + alpha * I) beta = dbar by LU with
/// partial pivoting. Independent of the incremental path in QkrlsModel.
/// Throws IllConditionedError when the system is numerically singular.
Eigen::MatrixXd batch_solve(const Codebook& codebook, double alpha, const KernelParams& kernel);

}  // namespace qkprog::qkrls

#endif  // QKPROG_QKRLS_MODEL_HPP
