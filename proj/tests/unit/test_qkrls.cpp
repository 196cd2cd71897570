#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "oracles.hpp"
#include "qkprog/qkrls/codebook.hpp"
#include "qkprog/qkrls/kernel.hpp"
#include "qkprog/qkrls/model.hpp"

using namespace qkprog::qkrls;
using qkprog::testing::brute_force_nearest;
using qkprog::testing::random_stream;
using qkprog::testing::reference_weights;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

ModelParams params(double sigma, double alpha, double eps_u) {
  ModelParams p;
  p.kernel.sigma = sigma;
  p.alpha = alpha;
  p.eps_u = eps_u;
  return p;
}

}  // namespace

TEST_CASE("gaussian kernel values") {
  KernelParams k1{1.0};
  CHECK(gaussian_kernel(vec({0.3, -2.0}), vec({0.3, -2.0}), k1) == 1.0);
  // squared distance 2 with sigma 1
  CHECK(gaussian_kernel(vec({1.0, 0.0}), vec({0.0, 1.0}), k1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(gaussian_kernel(vec({1.0, 0.0}), vec({0.0, 1.0}), k1) == doctest::Approx(0.367879).epsilon(1e-6));

  std::mt19937_64 rng(7);
  for (const auto& s : random_stream(rng, 50, 4, 1, 3.0)) {
    const Eigen::VectorXd y = s.x.reverse();
    const double a = gaussian_kernel(s.x, y, KernelParams{0.7});
    CHECK(a == gaussian_kernel(y, s.x, KernelParams{0.7}));
    CHECK(a > 0.0);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("gaussian kernel rejects bad input") {
  CHECK_THROWS_AS(gaussian_kernel(vec({1.0}), vec({1.0, 2.0}), KernelParams{}), std::invalid_argument);
  CHECK_THROWS_AS(KernelParams{0.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(KernelParams{-1.0}.validate(), std::invalid_argument);
}

TEST_CASE("quantize follows the threshold rule") {
  Codebook book(2, 1, 0.5);
  auto a = book.quantize(vec({0.5, 0.5}));
  CHECK(a.index == 0);
  CHECK(a.was_new);
  CHECK(book.size() == 1);

  Codebook origin(2, 1, 0.5);
  origin.quantize(vec({0.0, 0.0}));
  auto merged = origin.quantize(vec({0.3, 0.0}));
  CHECK(merged.index == 0);
  CHECK_FALSE(merged.was_new);
  CHECK(origin.counts()[0] == 2);
  // Centers are frozen at first occurrence.
  CHECK(origin.center(0) == vec({0.0, 0.0}));

  auto boundary = origin.quantize(vec({0.0, 0.5}));
  CHECK_FALSE(boundary.was_new);

  auto fresh = origin.quantize(vec({1.0, 0.0}));
  CHECK(fresh.index == 1);
  CHECK(fresh.was_new);
  CHECK(origin.total_count() == 4);
}

TEST_CASE("quantize breaks ties toward the earliest center") {
  Codebook book(1, 1, 0.0);
  book.quantize(vec({-1.0}));
  book.quantize(vec({1.0}));
  Codebook wide = Codebook::from_parts(1, 1, 1.0, {vec({-1.0}), vec({1.0})}, {1, 1}, {vec({0.0}), vec({0.0})});
  CHECK(book.nearest(vec({0.0})).index == 0);
  auto a = wide.quantize(vec({0.0}));
  CHECK(a.index == 0);
  CHECK_FALSE(a.was_new);
}

TEST_CASE("codebook rejects bad input") {
  Codebook book(2, 1, 0.1);
  CHECK_THROWS_AS(book.nearest(vec({0.0, 0.0})), std::logic_error);
  CHECK_THROWS_AS(book.quantize(vec({0.0})), std::invalid_argument);
  CHECK_THROWS_AS(Codebook(2, 1, -0.1), std::invalid_argument);
  CHECK_THROWS(Codebook::from_parts(1, 1, 0.5, {vec({0.0}), vec({0.2})}, {1, 1}, {vec({0.0}), vec({0.0})}));
  CHECK_THROWS(Codebook::from_parts(1, 1, 0.5, {vec({0.0})}, {0}, {vec({0.0})}));
  CHECK_THROWS(Codebook::from_parts(1, 1, 0.5, {vec({0.0})}, {1, 1}, {vec({0.0})}));
}

TEST_CASE("codebook matches the reference quantizer on random streams") {
  std::mt19937_64 rng(11);
  for (double eps : {0.0, 0.1, 0.5, 1.5}) {
    const auto stream = random_stream(rng, 300, 3, 2, 2.0);
    Codebook book(3, 2, eps);
    qkprog::testing::ReferenceCodebook ref{eps, {}, {}, {}};
    for (const auto& s : stream) {
      const auto a = book.quantize(s.x);
      book.accumulate(a.index, s.d);
      ref.add(s.x, s.d);
    }
    REQUIRE(book.size() == ref.centers.size());
    CHECK(book.total_count() == 300);
    for (std::size_t n = 0; n < book.size(); ++n) {
      CHECK(book.center(n) == ref.centers[n]);
      CHECK(book.counts()[n] == ref.counts[n]);
      CHECK(max_abs_diff(book.dbar(n), ref.target_sums[n]) < 1e-12);
      for (std::size_t m = 0; m < n; ++m) {
        CHECK((book.center(n) - book.center(m)).norm() > eps);
      }
    }
  }
}

TEST_CASE("update on a single center matches the scalar solve") {
  QkrlsModel model(1, 1, params(0.5, 0.01, 0.5));
  CHECK(model.empty());
  CHECK(model.beta().rows() == 0);
  model.update(vec({0.0}), vec({1.0}));
  model.update(vec({0.1}), vec({2.0}));
  REQUIRE(model.size() == 1);
  CHECK(model.beta()(0, 0) == doctest::Approx(3.0 / 2.01).epsilon(1e-14));
  CHECK(model.beta()(0, 0) == doctest::Approx(1.49254).epsilon(1e-5));
  // x equal to the center sees kernel value 1.
  CHECK(model.predict(vec({0.0}))(0) == doctest::Approx(3.0 / 2.01).epsilon(1e-14));
}

TEST_CASE("predict with distant centers reduces to the nearest weight") {
  QkrlsModel model(2, 1, params(0.5, 0.01, 0.1));
  model.update(vec({0.0, 0.0}), vec({1.0}));
  model.update(vec({10.0, 0.0}), vec({-2.0}));
  const double tail = std::exp(-100.0 / (2 * 0.25));
  CHECK(std::abs(model.predict(vec({0.0, 0.0}))(0) - model.beta()(0, 0)) < 1e-6);
  CHECK(tail < 1e-6);
}

TEST_CASE("predict on an empty model fails") {
  QkrlsModel model(2, 1, ModelParams{});
  CHECK_THROWS_WITH_AS(model.predict(vec({0.0, 0.0})), "untrained predictor", std::logic_error);
  CHECK_THROWS_AS(model.assign_state(vec({0.0, 0.0})), std::logic_error);
}

TEST_CASE("update rejects mismatched dimensions") {
  QkrlsModel model(2, 1, ModelParams{});
  CHECK_THROWS_AS(model.update(vec({0.0}), vec({1.0})), std::invalid_argument);
  CHECK_THROWS_AS(model.update(vec({0.0, 0.0}), vec({1.0, 2.0})), std::invalid_argument);
}

TEST_CASE("incremental weights track the dense oracle on every prefix") {
  std::mt19937_64 rng(2024);
  for (double eps : {0.0, 0.1, 0.5}) {
    const auto stream = random_stream(rng, 200, 6, 3, 10.0);
    const ModelParams p = params(2.0, 0.01, eps);
    QkrlsModel model(6, 3, p);
    double worst = 0.0;
    for (const auto& s : stream) {
      model.update(s.x, s.d);
      worst = std::max(worst, max_abs_diff(model.beta(), reference_weights(model.codebook(), p.alpha, 2.0)));
    }
    CHECK(worst < 1e-8);
    CHECK(max_abs_diff(model.beta(), batch_solve(model.codebook(), p.alpha, p.kernel)) < 1e-8);
  }
}

TEST_CASE("gram cache is symmetric with unit diagonal") {
  std::mt19937_64 rng(5);
  QkrlsModel model(4, 1, params(1.0, 0.01, 0.2));
  for (const auto& s : random_stream(rng, 120, 4, 1, 2.0)) model.update(s.x, s.d);
  const Eigen::MatrixXd g = model.gram();
  CHECK(g.rows() == static_cast<Eigen::Index>(model.size()));
  CHECK(g == g.transpose());
  CHECK(g.diagonal().isOnes());
}

TEST_CASE("zero quantization reduces to plain regularized KRLS") {
  std::mt19937_64 rng(99);
  const auto stream = random_stream(rng, 80, 3, 2, 3.0);
  QkrlsModel model(3, 2, params(1.0, 0.05, 0.0));
  for (const auto& s : stream) model.update(s.x, s.d);
  REQUIRE(model.size() == stream.size());
  // KRLS: (K + alpha I) beta = D over the raw samples.
  const auto n = static_cast<Eigen::Index>(stream.size());
  Eigen::MatrixXd k(n, n), d(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.row(i) = stream[static_cast<std::size_t>(i)].d.transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = std::exp(-(stream[static_cast<std::size_t>(i)].x - stream[static_cast<std::size_t>(j)].x).squaredNorm() / 2.0);
    }
  }
  k.diagonal().array() += 0.05;
  CHECK(max_abs_diff(model.beta(), k.ldlt().solve(d)) < 1e-8);
  for (long c : model.codebook().counts()) CHECK(c == 1);
}

TEST_CASE("batch solve examples") {
  const Codebook single = Codebook::from_parts(1, 1, 0.3, {vec({0.2})}, {2}, {vec({3.0})});
  CHECK(batch_solve(single, 0.01, KernelParams{})(0, 0) == doctest::Approx(1.49254).epsilon(1e-5));

  std::mt19937_64 rng(3);
  Codebook book(3, 2, 0.5);
  for (const auto& s : random_stream(rng, 40, 3, 2, 3.0)) {
    const auto a = book.quantize(s.x);
    book.accumulate(a.index, s.d * 5.0);
  }
  REQUIRE(book.size() >= 5);
  CHECK(batch_solve(book, 1e12, KernelParams{0.8}).norm() < 1e-9);

  const auto five = Codebook::from_parts(3, 2, 0.5, {book.centers().begin(), book.centers().begin() + 5},
                                         {book.counts().begin(), book.counts().begin() + 5},
                                         {book.dbar().begin(), book.dbar().begin() + 5});
  const Eigen::MatrixXd beta = batch_solve(five, 0.01, KernelParams{0.8});
  Eigen::MatrixXd system(5, 5), dbar(5, 2);
  for (Eigen::Index i = 0; i < 5; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    dbar.row(i) = five.dbar(ii).transpose();
    for (Eigen::Index j = 0; j < 5; ++j) {
      system(i, j) = static_cast<double>(five.counts()[ii]) *
                     gaussian_kernel(five.center(ii), five.center(static_cast<std::size_t>(j)), KernelParams{0.8});
    }
    system(i, i) += 0.01;
  }
  CHECK((system * beta - dbar).norm() / dbar.norm() < 1e-10);
}

TEST_CASE("batch solve reports ill-conditioning without regularization") {
  const Codebook dup = Codebook::from_parts(1, 1, 0.0, {vec({0.0}), vec({1e-9})}, {1, 1}, {vec({1.0}), vec({2.0})});
  CHECK_THROWS_AS(batch_solve(dup, 0.0, KernelParams{1.0}), IllConditionedError);
  CHECK_THROWS_AS(batch_solve(Codebook(1, 1, 0.0), 0.01, KernelParams{}), std::invalid_argument);

  QkrlsModel online(1, 1, params(1.0, 0.0, 0.0));
  online.update(vec({0.0}), vec({1.0}));
  CHECK_THROWS_AS(online.update(vec({1e-9}), vec({2.0})), IllConditionedError);
}

TEST_CASE("assign_state agrees with an exhaustive scan") {
  std::mt19937_64 rng(42);
  QkrlsModel model(3, 1, params(1.0, 0.01, 0.8));
  for (const auto& s : random_stream(rng, 100, 3, 1, 3.0)) model.update(s.x, s.d);
  REQUIRE(model.size() >= 20);
  for (const auto& q : random_stream(rng, 1000, 3, 1, 4.0)) {
    CHECK(model.assign_state(q.x) == brute_force_nearest(model.codebook().centers(), q.x));
  }
  for (std::size_t n = 0; n < model.size(); ++n) {
    CHECK(model.assign_state(model.codebook().center(n)) == n);
  }
}

TEST_CASE("assign_state ties go to the smallest index") {
  QkrlsModel model(1, 1, params(1.0, 0.01, 0.1));
  model.update(vec({-1.0}), vec({0.0}));
  model.update(vec({5.0}), vec({0.0}));
  model.update(vec({1.0}), vec({0.0}));
  CHECK(model.assign_state(vec({0.0})) == 0);
}

TEST_CASE("a farther extra center never changes the winner") {
  std::mt19937_64 rng(8);
  const auto stream = random_stream(rng, 60, 2, 1, 2.0);
  std::vector<Eigen::VectorXd> centers;
  for (const auto& s : stream) centers.push_back(s.x);
  for (const auto& q : random_stream(rng, 200, 2, 1, 2.0)) {
    const std::size_t before = brute_force_nearest(centers, q.x);
    const double best = (centers[before] - q.x).norm();
    const Eigen::VectorXd farther = q.x + Eigen::Vector2d(best + 0.5, 0.0);
    auto padded = Codebook::from_parts(2, 1, 0.0, centers, std::vector<long>(centers.size(), 1),
                                       std::vector<Eigen::VectorXd>(centers.size(), vec({0.0})));
    CHECK(padded.nearest(q.x).index == before);
  }
}

TEST_CASE("restore rebuilds an equivalent model") {
  std::mt19937_64 rng(17);
  const ModelParams p = params(1.5, 0.02, 0.3);
  QkrlsModel model(4, 2, p);
  const auto stream = random_stream(rng, 150, 4, 2, 3.0);
  for (std::size_t i = 0; i < 100; ++i) model.update(stream[i].x, stream[i].d);
  QkrlsModel copy = QkrlsModel::restore(p, model.codebook(), model.beta());
  CHECK(copy.size() == model.size());
  CHECK(copy.gram() == model.gram());
  for (std::size_t i = 100; i < stream.size(); ++i) {
    model.update(stream[i].x, stream[i].d);
    copy.update(stream[i].x, stream[i].d);
  }
  CHECK(max_abs_diff(copy.beta(), model.beta()) < 1e-9);
  CHECK(max_abs_diff(copy.beta(), reference_weights(copy.codebook(), p.alpha, 1.5)) < 1e-8);
}

TEST_CASE("model parameters are validated") {
  CHECK_THROWS_AS(params(0.5, -0.01, 0.3).validate(), std::invalid_argument);
  CHECK_NOTHROW(params(0.5, 0.0, 0.3).validate());
  CHECK_THROWS_AS(params(0.5, 0.01, -1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(QkrlsModel(2, 1, params(0.0, 0.01, 0.3)), std::invalid_argument);
}
