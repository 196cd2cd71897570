#ifndef QKPROG_QKRLS_CODEBOOK_HPP
#define QKPROG_QKRLS_CODEBOOK_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qkprog::qkrls {

/// Online vector-quantization codebook.
///
/// Centers are frozen at the value of the first input that created them and
/// kept in creation order, so index 0 is the earliest region visited and the
/// last index is the most recent one. Each center carries the number of
/// inputs assigned to it and the sum of their targets.
///
/// Indices are zero-based throughout the API; reports number states from 1.
class Codebook {
 public:
  struct Assignment {
    std::size_t index = 0;
    bool was_new = false;
  };

  struct Nearest {
    std::size_t index = 0;
    double squared_distance = 0.0;
  };

  Codebook() = default;
  Codebook(std::size_t input_dim, std::size_t output_dim, double eps_u);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  double eps_u() const { return eps_u_; }

  std::size_t size() const { return centers_.size(); }
  bool empty() const { return centers_.empty(); }

  const Eigen::VectorXd& center(std::size_t n) const { return centers_[n]; }
  const std::vector<Eigen::VectorXd>& centers() const { return centers_; }
  const std::vector<long>& counts() const { return counts_; }
  const Eigen::VectorXd& dbar(std::size_t n) const { return dbar_[n]; }
  const std::vector<Eigen::VectorXd>& dbar() const { return dbar_; }

  /// Total number of quantized samples (sum of counts).
  long total_count() const;

  /// Nearest center by Euclidean distance; ties go to the smallest index.
  /// Throws std::logic_error on an empty codebook.
  Nearest nearest(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Merges x into its nearest center when that center lies within eps_u,
  /// otherwise appends x as a new center with a zero target sum.
  Assignment quantize(const Eigen::Ref<const Eigen::VectorXd>& x);

  /// Adds d to the target sum of center n.
  void accumulate(std::size_t n, const Eigen::Ref<const Eigen::VectorXd>& d);

  /// Rebuilds a codebook from stored parts; validates every invariant.
  static Codebook from_parts(std::size_t input_dim, std::size_t output_dim, double eps_u,
                             std::vector<Eigen::VectorXd> centers, std::vector<long> counts,
                             std::vector<Eigen::VectorXd> dbar);

 private:
  void check_input(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  std::size_t input_dim_ = 0;
  std::size_t output_dim_ = 0;
  double eps_u_ = 0.0;
  std::vector<Eigen::VectorXd> centers_;
  std::vector<long> counts_;
  std::vector<Eigen::VectorXd> dbar_;
};

}  // namespace qkprog::qkrls

#endif  // QKPROG_QKRLS_CODEBOOK_HPP
