#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttcore/spectral.hpp"
#include "ttcore/ttc.hpp"

namespace ttcore {

// How spectral values map onto core scores.
//  example: the smallest value is the most core-like (score 1).
//  theorem: the largest value is the most core-like (score 1).
enum class Convention { example, theorem };

std::string to_string(Convention convention);

struct CoreEstimate {
  std::vector<AgentId> members;  // best first
  std::vector<double> scores;    // per agent, in [0, 1]
  ScoreMode mode = ScoreMode::right_singular;
  Convention convention = Convention::example;

  bool operator==(const CoreEstimate&) const = default;
};

struct MatchMetrics {
  double precision = 0.0;
  double recall = 0.0;
  bool exact = false;
  double rank_correlation = 0.0;  // NaN when either side is constant
};

struct CoreOptions {
  ScoreMode mode = ScoreMode::right_singular;
  SolverKind solver = SolverKind::power;
  Convention convention = Convention::example;
  PowerOptions power;
  RandomizedOptions randomized;
};

class CoreIdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SpectralScore compute_spectral(const StochasticMatrix& m, const CoreOptions& opts);

// Min-max rescaling of the spectral values onto [0, 1] in the direction set
// by the convention. Throws CoreIdError when n < 2 or the spread is <= 1e-14.
std::vector<double> score_agents(const SpectralScore& score, Convention convention);

// Top k agents by score, ties broken toward the lower agent id.
CoreEstimate identify_core_topk(std::span<const double> scores, std::size_t k, ScoreMode mode,
                                Convention convention);

// k rounds of: solve on the remaining agents, take the top one, delete its
// row and column, re-smooth and renormalize. `scores` holds the first round.
CoreEstimate identify_core_iterative(const StochasticMatrix& m, std::size_t k, const CoreOptions& opts);

// Single solve followed by top-k selection.
CoreEstimate identify_core(const StochasticMatrix& m, std::size_t k, const CoreOptions& opts);

// Spearman correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

// Precision and recall of the estimate against the final-round agents, and
// Spearman correlation between core scores and TTC removal rounds (positive
// when higher scores go with later removal).
MatchMetrics compare_to_truth(const CoreEstimate& estimate, const CoreSet& truth, const TtcOutcome& outcome);

// For each TTC cycle (i1..ik), max_j |f_j - f_{j+1}| / max_j f_j with
// f_j = pi_{i_j} m_{i_j, i_{j+1}}. Diagnostic only.
std::vector<double> cycle_flow_imbalance(std::span<const double> stationary, const StochasticMatrix& m,
                                         const TtcOutcome& outcome);

std::string to_json_string(const CoreEstimate& estimate);

}  // namespace ttcore
