#ifndef QKPROG_QKRLS_KERNEL_HPP
#define QKPROG_QKRLS_KERNEL_HPP

#include <cmath>

#include <Eigen/Dense>

namespace qkprog::qkrls {

/// Width of the Gaussian kernel, in (normalized) input-space units.
struct KernelParams {
  double sigma = 0.5;

  /// Throws std::invalid_argument unless sigma is finite and positive.
  void validate() const;
};

/// exp(-|x - y|^2 / (2 sigma^2)). Throws std::invalid_argument on a
/// dimension mismatch.
double gaussian_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const KernelParams& params);

/// Kernel value from an already computed squared distance.
inline double gaussian_from_squared_distance(double squared_distance, double sigma) {
  return std::exp(-squared_distance / (2.0 * sigma * sigma));
}

}  // namespace qkprog::qkrls

#endif  // QKPROG_QKRLS_KERNEL_HPP
