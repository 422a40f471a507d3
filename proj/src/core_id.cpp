#include "ttcore/core_id.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

namespace ttcore {

std::string to_string(Convention convention) {
  return convention == Convention::example ? "example" : "theorem";
}

SpectralScore compute_spectral(const StochasticMatrix& m, const CoreOptions& opts) {
  if (opts.mode == ScoreMode::stationary) return stationary_power(m, opts.power);
  switch (opts.solver) {
    case SolverKind::randomized:
      return randomized_rank1(m, opts.randomized);
    case SolverKind::dense_svd:
      return dense_svd_leading(m);
    case SolverKind::power:
      break;
  }
  return right_singular_power(m, opts.power);
}

std::vector<double> score_agents(const SpectralScore& score, Convention convention) {
  const auto& v = score.values;
  if (v.size() < 2) throw CoreIdError("degenerate score vector: need at least two agents");
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  const double spread = hi - lo;
  if (!(spread > 1e-14)) throw CoreIdError("degenerate score vector");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = convention == Convention::example ? (hi - v[i]) / spread : (v[i] - lo) / spread;
  }
  return out;
}

CoreEstimate identify_core_topk(std::span<const double> scores, std::size_t k, ScoreMode mode,
                                Convention convention) {
  const std::size_t n = scores.size();
  if (k < 1 || k > n) throw CoreIdError("identify_core_topk: k must lie in [1, n]");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });
  CoreEstimate est;
  est.mode = mode;
  est.convention = convention;
  est.scores.assign(scores.begin(), scores.end());
  for (std::size_t r = 0; r < k; ++r) est.members.push_back(static_cast<AgentId>(order[r] + 1));
  return est;
}

CoreEstimate identify_core(const StochasticMatrix& m, std::size_t k, const CoreOptions& opts) {
  const SpectralScore s = compute_spectral(m, opts);
  return identify_core_topk(score_agents(s, opts.convention), k, opts.mode, opts.convention);
}

CoreEstimate identify_core_iterative(const StochasticMatrix& m, std::size_t k, const CoreOptions& opts) {
  const std::size_t n = m.size();
  if (k < 1 || k + 1 > n) throw CoreIdError("identify_core_iterative: k must lie in [1, n - 1]");
  CoreEstimate est;
  est.mode = opts.mode;
  est.convention = opts.convention;
  std::vector<std::size_t> alive(n);
  std::iota(alive.begin(), alive.end(), std::size_t{0});
  StochasticMatrix current = m;
  for (std::size_t round = 0; round < k; ++round) {
    const auto scores = score_agents(compute_spectral(current, opts), opts.convention);
    if (round == 0) est.scores = scores;
    const std::size_t top = static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    est.members.push_back(static_cast<AgentId>(alive[top] + 1));
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(top));
    if (round + 1 == k) break;
    std::vector<std::size_t> keep(alive.size());
    std::size_t local = 0;
    for (std::size_t r = 0; r < scores.size(); ++r)
      if (r != top) keep[local++] = r;
    current = restrict_to(current, keep);
  }
  return est;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n != b.size() || n < 2) return std::numeric_limits<double>::quiet_NaN();
  const auto ra = average_ranks(a), rb = average_ranks(b);
  const double mean = 0.5 * static_cast<double>(n + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ra[i] - mean, db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

MatchMetrics compare_to_truth(const CoreEstimate& estimate, const CoreSet& truth, const TtcOutcome& outcome) {
  if (estimate.scores.size() != outcome.size()) throw CoreIdError("compare_to_truth: size mismatch");
  std::size_t hit = 0;
  for (AgentId a : estimate.members)
    if (truth.contains(a)) ++hit;
  MatchMetrics mm;
  mm.precision = estimate.members.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(estimate.members.size());
  mm.recall = truth.members.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(truth.size());
  mm.exact = mm.precision == 1.0 && mm.recall == 1.0;
  std::vector<double> rounds(outcome.removal_round.begin(), outcome.removal_round.end());
  mm.rank_correlation = spearman(estimate.scores, rounds);
  return mm;
}

std::vector<double> cycle_flow_imbalance(std::span<const double> stationary, const StochasticMatrix& m,
                                         const TtcOutcome& outcome) {
  std::vector<double> out;
  for (const auto& cycle : outcome.cycles) {
    const std::size_t k = cycle.agents.size();
    std::vector<double> flow(k);
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t from = cycle.agents[j] - 1, to = cycle.agents[(j + 1) % k] - 1;
      flow[j] = stationary[from] * m.at(from, to);
    }
    double worst = 0.0, peak = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      worst = std::max(worst, std::abs(flow[j] - flow[(j + 1) % k]));
      peak = std::max(peak, flow[j]);
    }
    out.push_back(peak > 0.0 ? worst / peak : 0.0);
  }
  return out;
}

std::string to_json_string(const CoreEstimate& estimate) {
  nlohmann::json j;
  j["members"] = estimate.members;
  j["scores"] = estimate.scores;
  j["mode"] = to_string(estimate.mode);
  j["convention"] = to_string(estimate.convention);
  return j.dump() + "\n";
}

}  // namespace ttcore
