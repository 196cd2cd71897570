#include "qkprog/qkrls/kernel.hpp"

#include <stdexcept>
#include <string>

namespace qkprog::qkrls {

void KernelParams::validate() const {
  if (!std::isfinite(sigma) || sigma <= 0.0) {
    throw std::invalid_argument("kernel width sigma must be positive, got " + std::to_string(sigma));
  }
}

double gaussian_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const KernelParams& params) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("gaussian_kernel: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  return gaussian_from_squared_distance((x - y).squaredNorm(), params.sigma);
}

}  // namespace qkprog::qkrls
