#include "ttcore/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "ttcore/kernels.hpp"

namespace ttcore {

std::string to_string(ScoreMode mode) {
  return mode == ScoreMode::stationary ? "stationary" : "singular";
}

std::string to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::power:
      return "power";
    case SolverKind::randomized:
      return "randomized";
    case SolverKind::dense_svd:
      return "dense_svd";
  }
  return "unknown";
}

namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(kernels::active().dot(v.data(), v.data(), v.size()));
}

// Iterations spent estimating the second singular value.
constexpr std::size_t kGapProbeSteps = 4;

// Lower bound on sigma_2^2 by a few steps of power iteration on M^T M
// restricted to the complement of v.
double probe_second_singular_sq(const RowMatrix& m, std::span<const double> v) {
  const auto& k = kernels::active();
  const std::size_t n = m.size();
  std::vector<double> u(n), w(n), z(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = static_cast<double>((i * 7919 + 17) % 104729) / 104729.0 - 0.5;
  auto project_out = [&](std::vector<double>& x) {
    k.axpy(-k.dot(x.data(), v.data(), n), v.data(), x.data(), n);
    k.axpy(-k.dot(x.data(), v.data(), n), v.data(), x.data(), n);
  };
  project_out(u);
  double nu = norm2(u);
  if (nu == 0.0) {
    for (std::size_t i = 0; i < n; ++i) u[i] = (i % 2 == 0) ? 1.0 : -1.0;
    project_out(u);
    nu = norm2(u);
    if (nu == 0.0) return 0.0;
  }
  k.scale(1.0 / nu, u.data(), n);
  double rayleigh = 0.0;
  for (std::size_t step = 0; step < kGapProbeSteps; ++step) {
    m.multiply(u, w);
    m.multiply_transposed(w, z);
    project_out(z);
    rayleigh = std::max(rayleigh, k.dot(u.data(), z.data(), n));
    const double nz = norm2(z);
    if (nz == 0.0) break;
    k.scale(1.0 / nz, z.data(), n);
    u.swap(z);
  }
  return rayleigh;
}

}  // namespace

SpectralScore stationary_power(const StochasticMatrix& m, const PowerOptions& opts) {
  const auto& k = kernels::active();
  const RowMatrix& a = m.matrix();
  const std::size_t n = a.size();
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  double change = 0.0;
  std::size_t it = 0;
  bool converged = false;
  while (it < opts.max_iter) {
    ++it;
    a.multiply_transposed(x, y);
    k.axpy(1.0, x.data(), y.data(), n);
    k.scale(1.0 / k.sum(y.data(), n), y.data(), n);
    change = k.l1_distance(x.data(), y.data(), n);
    x.swap(y);
    if (change < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw SolverError(SolverError::Kind::not_converged,
                      "stationary_power: no convergence after " + std::to_string(opts.max_iter) + " iterations",
                      change);
  }
  a.multiply_transposed(x, y);
  SpectralScore out;
  out.residual = k.l1_distance(x.data(), y.data(), n);
  out.values = std::move(x);
  out.mode = ScoreMode::stationary;
  out.solver = SolverKind::power;
  out.iterations = it;
  return out;
}

SpectralScore right_singular_power(const StochasticMatrix& m, const PowerOptions& opts) {
  const auto& k = kernels::active();
  const RowMatrix& a = m.matrix();
  const std::size_t n = a.size();
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n))), w(n), z(n);
  double change = 0.0;
  std::size_t it = 0;
  bool converged = false;
  while (it < opts.max_iter) {
    ++it;
    a.multiply(v, w);
    a.multiply_transposed(w, z);
    const double nz = norm2(z);
    if (nz == 0.0) throw SolverError(SolverError::Kind::breakdown, "right_singular_power: M^T M v vanished");
    k.scale(1.0 / nz, z.data(), n);
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += (z[i] - v[i]) * (z[i] - v[i]);
    change = std::sqrt(change);
    v.swap(z);
    if (change < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw SolverError(SolverError::Kind::not_converged,
                      "right_singular_power: no convergence after " + std::to_string(opts.max_iter) + " iterations",
                      change);
  }

  a.multiply(v, w);
  a.multiply_transposed(w, z);
  const double rho = k.dot(v.data(), z.data(), n);
  k.axpy(-rho, v.data(), z.data(), n);
  const double residual = norm2(z);

  if (n > 1) {
    const double gap_tol = std::max(opts.tol, 1e-9);
    const double second = probe_second_singular_sq(a, v);
    if (second >= rho * (1.0 - gap_tol)) {
      throw SolverError(SolverError::Kind::ill_separated, "right_singular_power: ill-separated spectrum", residual);
    }
  }

  SpectralScore out;
  out.values = canonicalize_sign(v);
  out.mode = ScoreMode::right_singular;
  out.solver = SolverKind::power;
  out.residual = residual;
  out.iterations = it;
  return out;
}

SpectralScore dense_svd_leading(const StochasticMatrix& m) {
  const std::size_t n = m.size();
  const std::vector<double> dense = m.matrix().to_dense();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
      dense.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
  Eigen::VectorXd v = svd.matrixV().col(0);
  SpectralScore out;
  out.values = canonicalize_sign(std::span<const double>(v.data(), n));
  out.mode = ScoreMode::right_singular;
  out.solver = SolverKind::dense_svd;
  out.iterations = 1;
  return out;
}

std::vector<double> canonicalize_sign(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  double total = 0.0;
  for (double x : v) total += x;
  bool flip = total < 0.0;
  if (total == 0.0 && !v.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[best])) best = i;
    flip = v[best] < 0.0;
  }
  if (flip)
    for (auto& x : out) x = -x;
  return out;
}

double abs_cosine(std::span<const double> a, std::span<const double> b) {
  const auto& k = kernels::active();
  const double na = norm2(a), nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(k.dot(a.data(), b.data(), a.size())) / (na * nb);
}

double line_angle(std::span<const double> a, std::span<const double> b) {
  const auto& k = kernels::active();
  const double na = norm2(a), nb = norm2(b);
  if (na == 0.0 || nb == 0.0) return std::numbers::pi / 2.0;
  const double sign = k.dot(a.data(), b.data(), a.size()) < 0.0 ? -1.0 : 1.0;
  double chord = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] / na - sign * b[i] / nb;
    chord += d * d;
  }
  return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(chord)));
}

}  // namespace ttcore
