#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ttcore/profile.hpp"

namespace ttcore {

// One trading cycle. agents[j] receives the endowment of agents[j+1 mod k];
// the cycle starts at its smallest agent id.
struct TradingCycle {
  std::size_t round = 0;
  std::vector<AgentId> agents;

  bool operator==(const TradingCycle&) const = default;
};

struct TtcOutcome {
  Allocation allocation;
  std::vector<std::size_t> removal_round;  // removal_round[i-1] for agent i, starting at 1
  std::vector<TradingCycle> cycles;        // ordered by round, then smallest agent

  std::size_t size() const { return removal_round.size(); }
  std::size_t rounds() const;
  bool operator==(const TtcOutcome&) const = default;
};

// Agents removed in the final TTC round, ascending.
struct CoreSet {
  std::vector<AgentId> members;

  std::size_t size() const { return members.size(); }
  bool contains(AgentId agent) const;
};

// Reference Top Trading Cycles. Each remaining agent points at the holder of
// its most preferred remaining listed object, or at itself once its listed
// objects are gone; every cycle of that functional graph trades and leaves.
TtcOutcome run_ttc(const PreferenceProfile& profile);

CoreSet ground_truth_core(const TtcOutcome& outcome);

// Rebuilds the allocation from the cycle list alone.
Allocation allocation_from_cycles(std::size_t n, const std::vector<TradingCycle>& cycles);

bool check_individual_rationality(const PreferenceProfile& profile, const Allocation& allocation);

inline constexpr std::size_t kParetoBruteForceMaxN = 8;

// Exhaustive search for a Pareto improvement. Unlisted objects other than the
// endowment are unacceptable and never count as an improvement.
// Throws std::invalid_argument when n > kParetoBruteForceMaxN.
bool check_pareto_bruteforce(const PreferenceProfile& profile, const Allocation& allocation);

// Mean of (n - pos + 1)/n over agents, pos the assigned object's 1-based
// rank; the endowment counts as position L_i + 1 when unlisted.
double mean_normalized_rank(const PreferenceProfile& profile, const Allocation& allocation);

std::string to_json_string(const TtcOutcome& outcome);

}  // namespace ttcore
