#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "ttcore/kernels.hpp"
#include "ttcore/spectral.hpp"

namespace ttcore {
namespace {

using Block = std::vector<std::vector<double>>;

// Columns whose norm falls below this fraction of their norm before
// projection are treated as linearly dependent and dropped.
constexpr double kDependenceRatio = 1e-10;

constexpr int kMaxRetries = 3;

// Modified Gram-Schmidt with one re-orthogonalization pass.
Block orthonormalize(Block cols) {
  const auto& k = kernels::active();
  Block q;
  for (auto& c : cols) {
    const std::size_t n = c.size();
    const double before = std::sqrt(k.dot(c.data(), c.data(), n));
    if (before == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : q) k.axpy(-k.dot(b.data(), c.data(), n), b.data(), c.data(), n);
    }
    const double after = std::sqrt(k.dot(c.data(), c.data(), n));
    if (after <= kDependenceRatio * before) continue;
    k.scale(1.0 / after, c.data(), n);
    q.push_back(std::move(c));
  }
  return q;
}

struct Breakdown {};

SpectralScore sketch_once(const RowMatrix& a, const RandomizedOptions& opts, std::uint64_t seed) {
  const auto& k = kernels::active();
  const std::size_t n = a.size();
  const std::size_t width = std::min(n, 1 + opts.oversampling);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Block omega(width, std::vector<double>(n));
  for (auto& col : omega)
    for (auto& x : col) x = gauss(rng);

  Block y(width, std::vector<double>(n));
  for (std::size_t c = 0; c < width; ++c) a.multiply(omega[c], y[c]);
  Block q = orthonormalize(std::move(y));
  if (q.empty()) throw Breakdown{};

  for (std::size_t round = 0; round < opts.power_iters; ++round) {
    Block z(q.size(), std::vector<double>(n));
    for (std::size_t c = 0; c < q.size(); ++c) a.multiply_transposed(q[c], z[c]);
    z = orthonormalize(std::move(z));
    if (z.empty()) throw Breakdown{};
    Block next(z.size(), std::vector<double>(n));
    for (std::size_t c = 0; c < z.size(); ++c) a.multiply(z[c], next[c]);
    q = orthonormalize(std::move(next));
    if (q.empty()) throw Breakdown{};
  }

  // Rows of B = Q^T M, stored as vectors M^T q_c.
  const std::size_t r = q.size();
  Block b(r, std::vector<double>(n));
  for (std::size_t c = 0; c < r; ++c) a.multiply_transposed(q[c], b[c]);

  Eigen::MatrixXd gram(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double d = k.dot(b[i].data(), b[j].data(), n);
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
      gram(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw Breakdown{};
  const Eigen::VectorXd w = eig.eigenvectors().col(static_cast<Eigen::Index>(r - 1));

  std::vector<double> v(n, 0.0);
  for (std::size_t c = 0; c < r; ++c) k.axpy(w(static_cast<Eigen::Index>(c)), b[c].data(), v.data(), n);
  const double nv = std::sqrt(k.dot(v.data(), v.data(), n));
  if (nv == 0.0) throw Breakdown{};
  k.scale(1.0 / nv, v.data(), n);

  std::vector<double> t(n), z(n);
  a.multiply(v, t);
  a.multiply_transposed(t, z);
  const double rho = k.dot(v.data(), z.data(), n);
  k.axpy(-rho, v.data(), z.data(), n);

  SpectralScore out;
  out.residual = std::sqrt(k.dot(z.data(), z.data(), n));
  out.values = canonicalize_sign(v);
  out.mode = ScoreMode::right_singular;
  out.solver = SolverKind::randomized;
  out.iterations = opts.power_iters;
  return out;
}

std::uint64_t retry_seed(std::uint64_t seed, int attempt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SpectralScore randomized_rank1(const StochasticMatrix& m, const RandomizedOptions& opts) {
  if (opts.oversampling < 1) throw std::invalid_argument("randomized_rank1: oversampling must be >= 1");
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    try {
      return sketch_once(m.matrix(), opts, attempt == 0 ? opts.seed : retry_seed(opts.seed, attempt));
    } catch (const Breakdown&) {
    }
  }
  throw SolverError(SolverError::Kind::breakdown, "randomized_rank1: sketch stayed rank-deficient after retries");
}

}  // namespace ttcore
