#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>

#include "ttcore/matrix.hpp"
#include "ttcore/profile.hpp"

namespace ttcore {

class MarkovError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rank scores: listed object at 1-based position p scores (n - p + 1)/n,
// unlisted objects score 0.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(RowMatrix m) : m_(std::move(m)) {}
  const RowMatrix& matrix() const { return m_; }
  std::size_t size() const { return m_.size(); }
  bool has_zero_entry() const;

 private:
  RowMatrix m_;
};

inline constexpr double kRowSumTolerance = 1e-12;

// Row-stochastic matrix: entries in [0, 1], every row sums to 1 within
// kRowSumTolerance. Construction checks both.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(RowMatrix m);
  const RowMatrix& matrix() const { return m_; }
  std::size_t size() const { return m_.size(); }
  double at(std::size_t i, std::size_t j) const { return m_.at(i, j); }

 private:
  RowMatrix m_;
};

// Stored sparse when the longest list is shorter than n/2.
ScoreMatrix build_scores(const PreferenceProfile& profile);

// Throws MarkovError on a row with zero sum.
StochasticMatrix normalize_rows(const ScoreMatrix& scores);

// Replaces every zero entry by eps (> 0).
ScoreMatrix smooth_truncated(const ScoreMatrix& scores, double eps);

inline double default_smoothing(std::size_t n) { return 1e-6 / static_cast<double>(n); }

// build_scores, smoothing with default_smoothing(n) if any entry is zero,
// then normalize_rows.
StochasticMatrix markov_matrix(const PreferenceProfile& profile);

// Re-smooths and renormalizes the principal submatrix on `keep`.
StochasticMatrix restrict_to(const StochasticMatrix& m, std::span<const std::size_t> keep);

enum class NoiseModel { score, rank };

// Multiplies each entry by 1 + z, z ~ Uniform(-eta, eta) i.i.d. in row-major
// order, then renormalizes rows. The result is dense. eta = 0 returns m.
StochasticMatrix perturb_scores(const StochasticMatrix& m, double eta, std::uint64_t seed);

// floor(eta * n) uniformly placed adjacent transpositions per agent list.
PreferenceProfile perturb_ranks(const PreferenceProfile& profile, double eta, std::uint64_t seed);

// Score model perturbs m; rank model perturbs the profile and rebuilds.
StochasticMatrix perturb(const PreferenceProfile& profile, const StochasticMatrix& m, double eta,
                         NoiseModel model, std::uint64_t seed);

}  // namespace ttcore
