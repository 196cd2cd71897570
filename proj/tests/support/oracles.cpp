#include "oracles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace qkprog::testing {

std::vector<Sample> random_stream(std::mt19937_64& rng, std::size_t count, std::size_t input_dim,
                                  std::size_t output_dim, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Sample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(input_dim));
    for (auto& v : x) v = gauss(rng);
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(input_dim));
    if (x.norm() > 0.0) x *= r / x.norm();
    Eigen::VectorXd d(static_cast<Eigen::Index>(output_dim));
    for (auto& v : d) v = 2.0 * unit(rng) - 1.0;
    out.push_back({x, d});
  }
  return out;
}

std::size_t brute_force_nearest(const std::vector<Eigen::VectorXd>& centers, const Eigen::VectorXd& x) {
  if (centers.empty()) throw std::logic_error("no centers");
  std::size_t best = 0;
  double best_d = (centers[0] - x).squaredNorm();
  for (std::size_t i = 1; i < centers.size(); ++i) {
    const double d = (centers[i] - x).squaredNorm();
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

void ReferenceCodebook::add(const Eigen::VectorXd& x, const Eigen::VectorXd& d) {
  if (!centers.empty()) {
    const std::size_t n = brute_force_nearest(centers, x);
    if ((centers[n] - x).norm() <= eps_u) {
      counts[n] += 1;
      target_sums[n] += d;
      return;
    }
  }
  centers.push_back(x);
  counts.push_back(1);
  target_sums.push_back(d);
}

Eigen::MatrixXd reference_weights(const std::vector<Eigen::VectorXd>& centers, const std::vector<long>& counts,
                                  const std::vector<Eigen::VectorXd>& dbar, double alpha, double sigma) {
  const auto n = static_cast<Eigen::Index>(centers.size());
  const auto s = n > 0 ? dbar[0].size() : 0;
  Eigen::MatrixXd system(n, n);
  Eigen::MatrixXd rhs(n, s);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dist2 = (centers[static_cast<std::size_t>(i)] - centers[static_cast<std::size_t>(j)]).squaredNorm();
      system(i, j) = static_cast<double>(counts[static_cast<std::size_t>(i)]) * std::exp(-dist2 / (2 * sigma * sigma));
    }
    system(i, i) += alpha;
    rhs.row(i) = dbar[static_cast<std::size_t>(i)].transpose();
  }
  return system.householderQr().solve(rhs);
}

Eigen::MatrixXd reference_weights(const qkrls::Codebook& codebook, double alpha, double sigma) {
  return reference_weights(codebook.centers(), codebook.counts(), codebook.dbar(), alpha, sigma);
}

ReferenceMetrics reference_metrics(const std::vector<int>& rul_true, const std::vector<int>& rul_est, int lo,
                                   int hi) {
  ReferenceMetrics m;
  const double n = static_cast<double>(rul_true.size());
  double mean_true = 0.0;
  for (int r : rul_true) mean_true += r;
  mean_true /= n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < rul_true.size(); ++i) {
    const double e = rul_est[i] - rul_true[i];
    m.mse += e * e / n;
    m.mae += std::abs(e) / n;
    m.mape_percent += 100.0 * std::abs(e) / rul_true[i] / n;
    m.score += e < 0 ? std::exp(-e / 13.0) - 1.0 : std::exp(e / 10.0) - 1.0;
    ss_res += e * e;
    ss_tot += (rul_true[i] - mean_true) * (rul_true[i] - mean_true);
    if (e < lo) {
      ++m.early;
    } else if (e > hi) {
      ++m.late;
    } else {
      ++m.in_time;
    }
  }
  m.r2 = 1.0 - ss_res / ss_tot;
  return m;
}

ScratchDir::ScratchDir(const std::string& tag) {
  static int serial = 0;
  path_ = std::filesystem::temp_directory_path() /
          ("qkprog_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(serial++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace qkprog::testing
