#include "ttcore/markov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

namespace ttcore {

bool ScoreMatrix::has_zero_entry() const {
  const std::size_t n = m_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m_.is_sparse()) {
      if (m_.stored_in_row(i) < n && m_.fill(i) == 0.0) return true;
      for (double v : m_.row_vals(i))
        if (v == 0.0) return true;
    } else {
      for (double v : m_.dense_row(i))
        if (v == 0.0) return true;
    }
  }
  return false;
}

StochasticMatrix::StochasticMatrix(RowMatrix m) : m_(std::move(m)) {
  const std::size_t n = m_.size();
  auto in_range = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (std::size_t i = 0; i < n; ++i) {
    if (m_.is_sparse()) {
      if (m_.stored_in_row(i) < n && !in_range(m_.fill(i)))
        throw MarkovError("row " + std::to_string(i + 1) + ": entry outside [0, 1]");
      for (double v : m_.row_vals(i))
        if (!in_range(v)) throw MarkovError("row " + std::to_string(i + 1) + ": entry outside [0, 1]");
    } else {
      for (double v : m_.dense_row(i))
        if (!in_range(v)) throw MarkovError("row " + std::to_string(i + 1) + ": entry outside [0, 1]");
    }
    if (std::abs(m_.row_sum(i) - 1.0) > kRowSumTolerance) {
      throw MarkovError("row " + std::to_string(i + 1) + " does not sum to 1");
    }
  }
}

ScoreMatrix build_scores(const PreferenceProfile& profile) {
  require_valid(profile);
  const std::size_t n = profile.size();
  const double dn = static_cast<double>(n);
  auto score = [&](std::size_t pos) { return static_cast<double>(n - pos) / dn; };  // pos 0-based

  if (2 * profile.max_list_length() < n) {
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    std::vector<std::pair<std::uint32_t, double>> row;
    for (const auto& list : profile.lists()) {
      row.clear();
      for (std::size_t p = 0; p < list.size(); ++p) row.emplace_back(list[p] - 1, score(p));
      std::sort(row.begin(), row.end());
      for (auto [c, v] : row) {
        cols.push_back(c);
        vals.push_back(v);
      }
      row_ptr.push_back(cols.size());
    }
    return ScoreMatrix(RowMatrix::sparse(n, std::move(row_ptr), std::move(cols), std::move(vals),
                                         std::vector<double>(n, 0.0)));
  }

  std::vector<double> dense(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& list = profile.lists()[i];
    for (std::size_t p = 0; p < list.size(); ++p) dense[i * n + (list[p] - 1)] = score(p);
  }
  return ScoreMatrix(RowMatrix::dense(n, std::move(dense)));
}

StochasticMatrix normalize_rows(const ScoreMatrix& scores) {
  const RowMatrix& g = scores.matrix();
  const std::size_t n = g.size();
  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = g.row_sum(i);
    if (!(s > 0.0)) throw MarkovError("row " + std::to_string(i + 1) + " has zero sum; smooth before normalizing");
    inv[i] = s;
  }
  return StochasticMatrix(g.transform([&](std::size_t i, double v) { return v / inv[i]; }));
}

ScoreMatrix smooth_truncated(const ScoreMatrix& scores, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("smooth_truncated: eps must be positive");
  return ScoreMatrix(scores.matrix().transform([eps](std::size_t, double v) { return v == 0.0 ? eps : v; }));
}

StochasticMatrix markov_matrix(const PreferenceProfile& profile) {
  ScoreMatrix g = build_scores(profile);
  if (g.has_zero_entry()) g = smooth_truncated(g, default_smoothing(profile.size()));
  return normalize_rows(g);
}

StochasticMatrix restrict_to(const StochasticMatrix& m, std::span<const std::size_t> keep) {
  ScoreMatrix sub(m.matrix().principal_submatrix(keep));
  if (sub.has_zero_entry()) sub = smooth_truncated(sub, default_smoothing(keep.size()));
  return normalize_rows(sub);
}

StochasticMatrix perturb_scores(const StochasticMatrix& m, double eta, std::uint64_t seed) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("perturb: eta must lie in [0, 1]");
  if (eta == 0.0) return m;
  const std::size_t n = m.size();
  std::vector<double> dense = m.matrix().to_dense();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-eta, eta);
  for (auto& v : dense) v *= 1.0 + noise(rng);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += dense[i * n + j];
    for (std::size_t j = 0; j < n; ++j) dense[i * n + j] /= s;
  }
  return StochasticMatrix(RowMatrix::dense(n, std::move(dense)));
}

PreferenceProfile perturb_ranks(const PreferenceProfile& profile, double eta, std::uint64_t seed) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("perturb: eta must lie in [0, 1]");
  const std::size_t n = profile.size();
  const auto swaps = static_cast<std::size_t>(std::floor(eta * static_cast<double>(n)));
  std::vector<std::vector<ObjectId>> lists(profile.lists().begin(), profile.lists().end());
  std::mt19937_64 rng(seed);
  for (auto& list : lists) {
    if (list.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pos(0, list.size() - 2);
    for (std::size_t s = 0; s < swaps; ++s) {
      const std::size_t p = pos(rng);
      std::swap(list[p], list[p + 1]);
    }
  }
  return PreferenceProfile(n, std::move(lists), profile.null_count());
}

StochasticMatrix perturb(const PreferenceProfile& profile, const StochasticMatrix& m, double eta,
                         NoiseModel model, std::uint64_t seed) {
  if (model == NoiseModel::score) return perturb_scores(m, eta, seed);
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("perturb: eta must lie in [0, 1]");
  if (eta == 0.0) return m;
  return markov_matrix(perturb_ranks(profile, eta, seed));
}

}  // namespace ttcore
