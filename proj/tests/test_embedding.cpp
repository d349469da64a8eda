#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "scenex/embedding.hpp"

using namespace scenex;

namespace {

DistanceMatrix matrix_from(const Eigen::MatrixXd& D) {
  DistanceMatrix m;
  m.kind = "test";
  m.D = D;
  for (Eigen::Index i = 0; i < D.rows(); ++i) m.ids.push_back(static_cast<std::uint64_t>(i));
  return m;
}

DistanceMatrix random_symmetric(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) D(i, j) = D(j, i) = u(rng);
  }
  return matrix_from(D);
}

// Independent double centering: Kc = K - row means - col means + grand mean.
Eigen::MatrixXd center(const Eigen::MatrixXd& K) {
  const Eigen::Index n = K.rows();
  Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n) -
                      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return J * K * J;
}

}  // namespace

TEST_CASE("median rescaling") {
  Eigen::MatrixXd D(3, 3);
  D << 0, 2, 8, 2, 0, 4, 8, 4, 0;
  // off-diagonal distances {2, 4, 8}: the lower median is 4
  const RescaledDistances r = rescale_to_median(matrix_from(D), 0.1);
  CHECK(r.factor == doctest::Approx(0.025));
  CHECK(r.matrix.D(0, 1) == doctest::Approx(0.05));
  CHECK(r.matrix.D(0, 2) == doctest::Approx(0.2));
  CHECK(r.matrix.D(1, 2) == doctest::Approx(0.1));
  CHECK(r.matrix.ids == std::vector<std::uint64_t>{0, 1, 2});

  // four points -> 6 pairs, lower median is the 3rd smallest
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(4, 4);
  const double vals[6] = {1, 2, 3, 4, 5, 6};
  int idx = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) E(i, j) = E(j, i) = vals[idx++];
  }
  CHECK(rescale_to_median(matrix_from(E), 0.3).factor == doctest::Approx(0.1));

  // all-zero distances: identity rescale
  const RescaledDistances z = rescale_to_median(matrix_from(Eigen::MatrixXd::Zero(3, 3)), 0.1);
  CHECK(z.factor == 1.0);

  // rescaling an already-rescaled matrix is a no-op
  const RescaledDistances twice = rescale_to_median(r.matrix, 0.1);
  CHECK(twice.factor == doctest::Approx(1.0));

  CHECK_THROWS_AS(rescale_to_median(matrix_from(D), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rescale_to_median(matrix_from(D), -1.0), std::invalid_argument);
}

TEST_CASE("radial kernel values") {
  Eigen::MatrixXd D(2, 2);
  D << 0, 0.5, 0.5, 0;
  const KernelMatrix K = rbf_kernel(matrix_from(D), 2.0);
  CHECK(K.gamma == 2.0);
  CHECK(K.K(0, 0) == 1.0);
  CHECK(K.K(1, 1) == 1.0);
  CHECK(K.K(0, 1) == doctest::Approx(std::exp(-2.0 * 0.25)));
  CHECK_THROWS_AS(rbf_kernel(matrix_from(D), 0.0), std::invalid_argument);
}

TEST_CASE("embedding rows are centered and eigenvalues clipped non-negative") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 8 + static_cast<int>(rng() % 20);
    const DistanceMatrix D = random_symmetric(rng, n, 0.0, 1.0);
    const KernelMatrix K = rbf_kernel(D, 50.0);
    const Embedding e = kernel_pca(K, static_cast<std::size_t>(n), D.ids);

    // the centered kernel the embedding is built from has zero row sums
    const Eigen::MatrixXd Kc = center(K.K);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(std::abs(Kc.row(i).sum()) < 1e-9);
    }
    for (Eigen::Index j = 0; j < e.eigenvalues.size(); ++j) {
      CHECK(e.eigenvalues(j) >= 0.0);
      if (j > 0) CHECK(e.eigenvalues(j) <= e.eigenvalues(j - 1));
      // coordinate columns carry sqrt(eigenvalue) scaling
      CHECK(e.coordinates.col(j).squaredNorm() == doctest::Approx(e.eigenvalues(j)));
    }
    // every coordinate column is mean-free up to roundoff
    for (Eigen::Index j = 0; j < e.coordinates.cols(); ++j) {
      CHECK(std::abs(e.coordinates.col(j).sum()) < 1e-6);
    }
  }
}

TEST_CASE("full-rank coordinates reproduce the clipped centered kernel") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 10 + static_cast<int>(rng() % 15);
    const DistanceMatrix D = random_symmetric(rng, n, 0.0, 0.5);
    const KernelMatrix K = rbf_kernel(D, 30.0);
    const Embedding e = kernel_pca(K, static_cast<std::size_t>(n), D.ids);

    // clip the centered kernel's spectrum independently
    const Eigen::MatrixXd Kc = center(K.K);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Kc);
    REQUIRE(solver.info() == Eigen::Success);
    const Eigen::MatrixXd clipped = solver.eigenvectors() *
                                    solver.eigenvalues().cwiseMax(0.0).asDiagonal() *
                                    solver.eigenvectors().transpose();
    const Eigen::MatrixXd gram = e.coordinates * e.coordinates.transpose();
    CHECK((gram - clipped).norm() <= 1e-6 * std::max(1.0, clipped.norm()));

    // independently computed negative spectral mass
    double pos = 0.0, neg = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = solver.eigenvalues()(i);
      (v >= 0.0 ? pos : neg) += std::abs(v);
    }
    const double mass = (pos + neg) > 0.0 ? neg / (pos + neg) : 0.0;
    CHECK(e.negative_eigen_mass == doctest::Approx(mass).epsilon(1e-9));
  }
}

TEST_CASE("distances between real points give a positive semidefinite kernel") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 20;
  Eigen::MatrixXd pts(n, 2);
  for (int i = 0; i < n; ++i) {
    pts(i, 0) = u(rng);
    pts(i, 1) = u(rng);
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) D(i, j) = (pts.row(i) - pts.row(j)).norm();
  }
  const Embedding psd =
      kernel_pca(rbf_kernel(matrix_from(D), 3.0), n, matrix_from(D).ids);
  CHECK(psd.negative_eigen_mass < 1e-10);

  // a strongly non-metric distance table has real negative mass
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 4);
  bad(0, 1) = bad(1, 0) = 10.0;
  bad(0, 2) = bad(2, 0) = 0.1;
  bad(1, 2) = bad(2, 1) = 0.1;
  bad(0, 3) = bad(3, 0) = 0.1;
  bad(1, 3) = bad(3, 1) = 0.1;
  bad(2, 3) = bad(3, 2) = 10.0;
  const Embedding indef = kernel_pca(rbf_kernel(matrix_from(bad), 1.0), 4, matrix_from(bad).ids);
  CHECK(indef.negative_eigen_mass > 0.01);
}

TEST_CASE("truncation keeps the leading components") {
  std::mt19937_64 rng(3);
  const DistanceMatrix D = random_symmetric(rng, 12, 0.0, 1.0);
  const KernelMatrix K = rbf_kernel(D, 20.0);
  const Embedding full = kernel_pca(K, 12, D.ids);
  const Embedding top3 = kernel_pca(K, 3, D.ids);
  CHECK(top3.coordinates.cols() == 3);
  CHECK(top3.eigenvalues.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(top3.eigenvalues(j) == full.eigenvalues(j));
    // eigenvectors are sign-ambiguous; compare up to sign
    const double diff = (top3.coordinates.col(j) - full.coordinates.col(j)).norm();
    const double flip = (top3.coordinates.col(j) + full.coordinates.col(j)).norm();
    CHECK(std::min(diff, flip) < 1e-10);
  }
}

TEST_CASE("argument validation") {
  std::mt19937_64 rng(1);
  const DistanceMatrix D = random_symmetric(rng, 5, 0.0, 1.0);
  const KernelMatrix K = rbf_kernel(D, 10.0);
  CHECK_THROWS_AS(kernel_pca(K, 0, D.ids), std::invalid_argument);
  CHECK_THROWS_AS(kernel_pca(K, 6, D.ids), std::invalid_argument);
  CHECK_THROWS_AS(kernel_pca(K, 3, {1, 2}), std::invalid_argument);
  KernelMatrix bad;
  bad.K = Eigen::MatrixXd::Zero(3, 4);
  bad.gamma = 1.0;
  CHECK_THROWS_AS(kernel_pca(bad, 2, {0, 1, 2}), std::invalid_argument);
}

TEST_CASE("embedding CSV round trip") {
  std::mt19937_64 rng(17);
  const DistanceMatrix D = random_symmetric(rng, 7, 0.0, 1.0);
  Embedding e = kernel_pca(rbf_kernel(D, 40.0), 3, D.ids);
  e.ids = {2, 3, 5, 7, 11, 13, 17};
  const std::string csv = e.to_csv();
  const Embedding r = Embedding::from_csv(csv);
  CHECK(r.ids == e.ids);
  CHECK(r.gamma == e.gamma);
  CHECK(r.negative_eigen_mass == e.negative_eigen_mass);
  CHECK((r.eigenvalues == e.eigenvalues));
  CHECK((r.coordinates == e.coordinates));
  CHECK(r.to_csv() == csv);
  CHECK_THROWS_AS(Embedding::from_csv("nonsense\n"), std::runtime_error);
}
