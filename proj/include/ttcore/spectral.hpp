#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttcore/markov.hpp"

namespace ttcore {

enum class ScoreMode { stationary, right_singular };
enum class SolverKind { power, randomized, dense_svd };

std::string to_string(ScoreMode mode);
std::string to_string(SolverKind solver);

// Per-agent leading-vector values (0-based index = agent - 1).
//  stationary:     nonnegative, sums to 1.
//  right_singular: unit Euclidean norm, sign-canonicalized.
struct SpectralScore {
  std::vector<double> values;
  ScoreMode mode = ScoreMode::right_singular;
  SolverKind solver = SolverKind::power;
  double residual = 0.0;
  std::size_t iterations = 0;

  std::size_t size() const { return values.size(); }
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { not_converged, ill_separated, breakdown };

  SolverError(Kind kind, const std::string& what, double residual = 0.0)
      : std::runtime_error(what), kind_(kind), residual_(residual) {}

  Kind kind() const { return kind_; }
  double residual() const { return residual_; }

 private:
  Kind kind_;
  double residual_;
};

struct PowerOptions {
  double tol = 1e-12;
  std::size_t max_iter = 10000;
};

struct RandomizedOptions {
  std::size_t oversampling = 7;
  std::size_t power_iters = 2;
  std::uint64_t seed = 0;
};

// Stationary distribution by power iteration on the lazy chain (I + M)/2,
// started from the uniform vector and L1-normalized each step. Stops when
// successive iterates differ by less than tol in L1. The residual is
// ||x^T M - x^T||_1 of the returned vector.
SpectralScore stationary_power(const StochasticMatrix& m, const PowerOptions& opts = {});

// Top right singular vector by power iteration on M^T M from the uniform
// vector. Stops when the unit iterate moves by less than tol (L2). Throws
// SolverError::ill_separated when the top two singular values cannot be told
// apart. The residual is ||M^T M v - rho v||_2 with rho the Rayleigh quotient.
SpectralScore right_singular_power(const StochasticMatrix& m, const PowerOptions& opts = {});

// Rank-1 randomized SVD: Gaussian n x (1 + p) sketch, q rounds of subspace
// iteration with re-orthonormalization, then the top right singular vector of
// the small projected matrix Q^T M. A rank-deficient sketch is retried with a
// derived seed up to three times.
SpectralScore randomized_rank1(const StochasticMatrix& m, const RandomizedOptions& opts = {});

// Full dense SVD baseline (Eigen BDCSVD); O(n^3).
SpectralScore dense_svd_leading(const StochasticMatrix& m);

// Returns v or -v: the one with nonnegative entry sum; on an exact zero sum,
// the one whose first largest-magnitude entry is positive.
std::vector<double> canonicalize_sign(std::span<const double> v);

// |<a, b>| / (|a| |b|)
double abs_cosine(std::span<const double> a, std::span<const double> b);

// Angle in [0, pi/2] between the lines spanned by a and b. Uses the chord
// length, so identical directions give exactly 0.
double line_angle(std::span<const double> a, std::span<const double> b);

}  // namespace ttcore
