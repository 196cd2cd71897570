#include "qkprog/qkrls/codebook.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qkprog::qkrls {

Codebook::Codebook(std::size_t input_dim, std::size_t output_dim, double eps_u)
    : input_dim_(input_dim), output_dim_(output_dim), eps_u_(eps_u) {
  if (input_dim == 0 || output_dim == 0) {
    throw std::invalid_argument("codebook dimensions must be positive");
  }
  if (!std::isfinite(eps_u) || eps_u < 0.0) {
    throw std::invalid_argument("quantization size eps_u must be >= 0");
  }
}

long Codebook::total_count() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0L);
}

void Codebook::check_input(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (static_cast<std::size_t>(x.size()) != input_dim_) {
    throw std::invalid_argument("codebook: input has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(input_dim_));
  }
}

Codebook::Nearest Codebook::nearest(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  check_input(x);
  if (centers_.empty()) {
    throw std::logic_error("codebook is empty");
  }
  Nearest best{0, (x - centers_[0]).squaredNorm()};
  for (std::size_t n = 1; n < centers_.size(); ++n) {
    const double dist = (x - centers_[n]).squaredNorm();
    if (dist < best.squared_distance) {
      best = {n, dist};
    }
  }
  return best;
}

Codebook::Assignment Codebook::quantize(const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_input(x);
  if (!centers_.empty()) {
    const Nearest near = nearest(x);
    // Compare distances, not squares, so the threshold matches the separation invariant.
    if (std::sqrt(near.squared_distance) <= eps_u_) {
      ++counts_[near.index];
      return {near.index, false};
    }
  }
  centers_.emplace_back(x);
  counts_.push_back(1);
  dbar_.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(output_dim_)));
  return {centers_.size() - 1, true};
}

void Codebook::accumulate(std::size_t n, const Eigen::Ref<const Eigen::VectorXd>& d) {
  if (static_cast<std::size_t>(d.size()) != output_dim_) {
    throw std::invalid_argument("codebook: target has dimension " + std::to_string(d.size()) +
                                ", expected " + std::to_string(output_dim_));
  }
  dbar_.at(n) += d;
}

Codebook Codebook::from_parts(std::size_t input_dim, std::size_t output_dim, double eps_u,
                              std::vector<Eigen::VectorXd> centers, std::vector<long> counts,
                              std::vector<Eigen::VectorXd> dbar) {
  Codebook book(input_dim, output_dim, eps_u);
  if (centers.size() != counts.size() || centers.size() != dbar.size()) {
    throw std::invalid_argument("codebook: centers, counts and dbar differ in length");
  }
  for (std::size_t n = 0; n < centers.size(); ++n) {
    if (static_cast<std::size_t>(centers[n].size()) != input_dim ||
        static_cast<std::size_t>(dbar[n].size()) != output_dim) {
      throw std::invalid_argument("codebook: entry " + std::to_string(n) + " has wrong dimension");
    }
    if (counts[n] < 1) {
      throw std::invalid_argument("codebook: count of entry " + std::to_string(n) + " is < 1");
    }
    for (std::size_t m = 0; m < n; ++m) {
      if ((centers[n] - centers[m]).norm() <= eps_u) {
        throw std::invalid_argument("codebook: centers " + std::to_string(m) + " and " + std::to_string(n) +
                                    " are within eps_u of each other");
      }
    }
  }
  book.centers_ = std::move(centers);
  book.counts_ = std::move(counts);
  book.dbar_ = std::move(dbar);
  return book;
}

}  // namespace qkprog::qkrls
