#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ttcore/spectral.hpp"

using namespace ttcore;

namespace {

StochasticMatrix worked_matrix() {
  return markov_matrix(PreferenceProfile(3, {{2, 1, 3}, {1, 2, 3}, {1, 3, 2}}));
}

StochasticMatrix random_positive(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] = d(rng) + 1e-3;
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] /= s;
  }
  return StochasticMatrix(RowMatrix::dense(n, std::move(a)));
}

Eigen::MatrixXd to_eigen(const StochasticMatrix& m) {
  const std::size_t n = m.size();
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m.at(i, j);
  return a;
}

// Oracle: solve pi^T (M - I) = 0 with sum(pi) = 1 by LU.
std::vector<double> stationary_oracle(const StochasticMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a = to_eigen(m).transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = a.partialPivLu().solve(rhs);
  return {pi.data(), pi.data() + n};
}

// Oracle: one-sided Jacobi SVD.
std::vector<double> singular_oracle(const StochasticMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeFullV);
  Eigen::VectorXd v = svd.matrixV().col(0);
  return canonicalize_sign(std::vector<double>(v.data(), v.data() + v.size()));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("stationary_power") {
  SUBCASE("worked example matches the linear-solve oracle (3/7, 13/35, 1/5)") {
    const auto s = stationary_power(worked_matrix());
    CHECK(s.mode == ScoreMode::stationary);
    CHECK(std::abs(s.values[0] - 3.0 / 7.0) <= 1e-10);
    CHECK(std::abs(s.values[1] - 13.0 / 35.0) <= 1e-10);
    CHECK(std::abs(s.values[2] - 0.2) <= 1e-10);
    CHECK(max_abs_diff(s.values, stationary_oracle(worked_matrix())) <= 1e-10);
  }
  SUBCASE("periodic two-cycle") {
    const auto s = stationary_power(StochasticMatrix(RowMatrix::dense(2, {0, 1, 1, 0})));
    CHECK(s.values[0] == doctest::Approx(0.5));
    CHECK(s.values[1] == doctest::Approx(0.5));
  }
  SUBCASE("uniform matrix") {
    const auto s = stationary_power(StochasticMatrix(RowMatrix::dense(4, std::vector<double>(16, 0.25))));
    for (double v : s.values) CHECK(v == doctest::Approx(0.25));
  }
  SUBCASE("non-convergence carries the residual") {
    try {
      stationary_power(random_positive(20, 1), PowerOptions{1e-300, 3});
      FAIL("expected SolverError");
    } catch (const SolverError& e) {
      CHECK(e.kind() == SolverError::Kind::not_converged);
      CHECK(e.residual() > 0.0);
    }
  }
  SUBCASE("residual and normalization on random chains") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto m = random_positive(10 + 20 * seed, seed);
      const auto s = stationary_power(m);
      double total = 0.0;
      for (double v : s.values) total += v;
      CHECK(std::abs(total - 1.0) <= 1e-12);
      CHECK(s.residual <= 10 * 1e-12);
    }
  }
  SUBCASE("lazy chain keeps the stationary vector") {
    for (std::size_t n : {5, 40, 200}) {
      const auto m = random_positive(n, n);
      std::vector<double> lazy(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) lazy[i * n + j] = 0.5 * (m.at(i, j) + (i == j ? 1.0 : 0.0));
      const auto via_lazy = stationary_power(StochasticMatrix(RowMatrix::dense(n, lazy)));
      CHECK(max_abs_diff(via_lazy.values, stationary_oracle(m)) <= 1e-10);
    }
  }
}

TEST_CASE("right_singular_power") {
  SUBCASE("worked example") {
    const auto s = right_singular_power(worked_matrix());
    // Exact-matrix values from an independent SVD.
    const std::vector<double> expected{0.7439474406184104, 0.5567509834999916, 0.3695545263815726};
    CHECK(max_abs_diff(s.values, expected) <= 1e-9);
    CHECK(max_abs_diff(s.values, singular_oracle(worked_matrix())) <= 1e-9);
    CHECK(s.residual <= 1e-10);
  }
  SUBCASE("identity is ill-separated") {
    std::vector<double> eye(9, 0.0);
    eye[0] = eye[4] = eye[8] = 1.0;
    try {
      right_singular_power(StochasticMatrix(RowMatrix::dense(3, eye)));
      FAIL("expected SolverError");
    } catch (const SolverError& e) {
      CHECK(e.kind() == SolverError::Kind::ill_separated);
    }
  }
  SUBCASE("rank-1 matrix 1 b^T recovers b") {
    const std::vector<double> b{0.1, 0.2, 0.3, 0.4};
    std::vector<double> a;
    for (int r = 0; r < 4; ++r) a.insert(a.end(), b.begin(), b.end());
    const auto s = right_singular_power(StochasticMatrix(RowMatrix::dense(4, a)));
    const double nb = std::sqrt(0.01 + 0.04 + 0.09 + 0.16);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s.values[i] - b[i] / nb) <= 1e-12);
  }
  SUBCASE("agrees with the Jacobi SVD oracle on random matrices") {
    for (std::size_t n : {7, 31, 120}) {
      const auto m = random_positive(n, 100 + n);
      CHECK(max_abs_diff(right_singular_power(m).values, singular_oracle(m)) <= 1e-9);
    }
  }
  SUBCASE("sparse and dense storage give the same vector") {
    const auto sparse = markov_matrix(generate_random(60, 5, 9));
    REQUIRE(sparse.matrix().is_sparse());
    const StochasticMatrix dense(RowMatrix::dense(60, sparse.matrix().to_dense()));
    CHECK(max_abs_diff(right_singular_power(sparse).values, right_singular_power(dense).values) <= 1e-10);
    CHECK(max_abs_diff(stationary_power(sparse).values, stationary_power(dense).values) <= 1e-10);
  }
}

TEST_CASE("randomized_rank1") {
  SUBCASE("worked example agrees with power iteration") {
    const auto r = randomized_rank1(worked_matrix(), RandomizedOptions{7, 2, 3});
    CHECK(abs_cosine(r.values, right_singular_power(worked_matrix()).values) >= 0.999);
  }
  SUBCASE("rank-1 recovery is exact") {
    const std::vector<double> b{0.05, 0.15, 0.3, 0.5};
    std::vector<double> a;
    for (int r = 0; r < 4; ++r) a.insert(a.end(), b.begin(), b.end());
    const auto s = randomized_rank1(StochasticMatrix(RowMatrix::dense(4, a)), RandomizedOptions{7, 2, 11});
    const double nb = std::sqrt(0.0025 + 0.0225 + 0.09 + 0.25);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s.values[i] - b[i] / nb) <= 1e-10);
  }
  SUBCASE("seed independence on a well-separated matrix") {
    const auto m = random_positive(80, 4);
    const auto a = randomized_rank1(m, RandomizedOptions{7, 2, 1});
    const auto b = randomized_rank1(m, RandomizedOptions{7, 2, 2});
    CHECK(max_abs_diff(a.values, b.values) <= 1e-6);
    CHECK(max_abs_diff(a.values, singular_oracle(m)) <= 1e-6);
  }
  SUBCASE("deterministic under a fixed seed") {
    const auto m = random_positive(50, 8);
    CHECK(randomized_rank1(m, RandomizedOptions{7, 2, 5}).values == randomized_rank1(m, RandomizedOptions{7, 2, 5}).values);
  }
  SUBCASE("agreement with power iteration across sizes") {
    for (std::size_t n : {10, 50, 200, 500}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = random_positive(n, 1000 * n + seed);
        CHECK(abs_cosine(randomized_rank1(m, RandomizedOptions{7, 2, seed}).values,
                         right_singular_power(m).values) >= 0.999);
      }
    }
  }
  SUBCASE("sparse truncated matrix") {
    const auto m = markov_matrix(generate_random(300, 12, 3));
    REQUIRE(m.matrix().is_sparse());
    CHECK(abs_cosine(randomized_rank1(m).values, dense_svd_leading(m).values) >= 0.999);
  }
}

TEST_CASE("canonicalize_sign") {
  CHECK(canonicalize_sign(std::vector<double>{-0.748, -0.556, -0.363}) == std::vector<double>{0.748, 0.556, 0.363});
  CHECK(canonicalize_sign(std::vector<double>{0.6, 0.8}) == std::vector<double>{0.6, 0.8});
  CHECK(canonicalize_sign(std::vector<double>{-0.5, 0.5}) == std::vector<double>{0.5, -0.5});
  CHECK(canonicalize_sign(std::vector<double>{0.5, -0.5}) == std::vector<double>{0.5, -0.5});

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> v(1 + rep % 9), neg;
    for (auto& x : v) x = g(rng);
    for (double x : v) neg.push_back(-x);
    CHECK(canonicalize_sign(v) == canonicalize_sign(neg));
  }
}

TEST_CASE("perturbation angle shrinks with n") {
  // Median angle between leading vectors of M and its 5% score-noise version.
  std::vector<double> medians;
  for (std::size_t n : {100, 500, 1000}) {
    std::vector<double> angles;
    for (std::uint64_t t = 0; t < 15; ++t) {
      const auto profile = generate_random(n, n, 500 + t);
      const auto m = markov_matrix(profile);
      const auto noisy = perturb(profile, m, 0.05, NoiseModel::score, 900 + t);
      angles.push_back(std::acos(std::min(1.0, abs_cosine(right_singular_power(m).values,
                                                            right_singular_power(noisy).values))));
    }
    std::sort(angles.begin(), angles.end());
    medians.push_back(angles[angles.size() / 2]);
  }
  MESSAGE("median angles (rad) n=100,500,1000: " << medians[0] << ", " << medians[1] << ", " << medians[2]);
  CHECK(medians[0] > medians[1]);
  CHECK(medians[1] > medians[2]);
}

TEST_CASE("line_angle") {
  const std::vector<double> a{0.3, 0.4, 0.5}, e1{1, 0}, e2{0, 1}, diag{1, 1};
  CHECK(line_angle(a, a) == 0.0);
  CHECK(line_angle(a, std::vector<double>{-0.6, -0.8, -1.0}) == 0.0);
  CHECK(line_angle(e1, e2) == doctest::Approx(std::acos(0.0)));
  CHECK(line_angle(e1, diag) == doctest::Approx(std::atan(1.0)));
  const std::vector<double> tilt{1.0, 1e-9};
  CHECK(line_angle(e1, tilt) == doctest::Approx(1e-9).epsilon(1e-6));
}
