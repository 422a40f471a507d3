#include "ttcore/ttc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace ttcore {

std::size_t TtcOutcome::rounds() const {
  return removal_round.empty() ? 0 : *std::max_element(removal_round.begin(), removal_round.end());
}

bool CoreSet::contains(AgentId agent) const {
  return std::binary_search(members.begin(), members.end(), agent);
}

TtcOutcome run_ttc(const PreferenceProfile& profile) {
  require_valid(profile);
  const std::size_t n = profile.size();

  // Internal indices are 0-based; object o is held by agent o until that agent leaves.
  std::vector<bool> present(n, true);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::size_t> succ(n);
  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});

  enum Color : unsigned char { white, grey, black };
  std::vector<Color> color(n, white);

  TtcOutcome out;
  out.allocation.assignment.assign(n, 0);
  out.removal_round.assign(n, 0);

  std::size_t round = 0;
  std::vector<std::size_t> path;
  std::vector<TradingCycle> round_cycles;
  while (!remaining.empty()) {
    ++round;
    for (std::size_t a : remaining) {
      const auto& list = profile.lists()[a];
      while (cursor[a] < list.size() && !present[list[cursor[a]] - 1]) ++cursor[a];
      succ[a] = cursor[a] < list.size() ? list[cursor[a]] - 1 : a;
      color[a] = white;
    }

    // Three-colour walk of the functional graph: a walk that runs into a grey
    // vertex closes a new cycle; running into black means the tail leads into
    // an already-known cycle or tree.
    round_cycles.clear();
    for (std::size_t start : remaining) {
      if (color[start] != white) continue;
      path.clear();
      std::size_t v = start;
      while (color[v] == white) {
        color[v] = grey;
        path.push_back(v);
        v = succ[v];
      }
      if (color[v] == grey) {
        auto it = std::find(path.begin(), path.end(), v);
        TradingCycle cycle{round, {}};
        for (auto p = it; p != path.end(); ++p) cycle.agents.push_back(static_cast<AgentId>(*p + 1));
        std::rotate(cycle.agents.begin(), std::min_element(cycle.agents.begin(), cycle.agents.end()),
                    cycle.agents.end());
        round_cycles.push_back(std::move(cycle));
      }
      for (std::size_t p : path) color[p] = black;
    }

    std::sort(round_cycles.begin(), round_cycles.end(),
              [](const TradingCycle& a, const TradingCycle& b) { return a.agents.front() < b.agents.front(); });
    for (auto& cycle : round_cycles) {
      for (AgentId agent : cycle.agents) {
        const std::size_t a = agent - 1;
        out.allocation.assignment[a] = static_cast<ObjectId>(succ[a] + 1);
        out.removal_round[a] = round;
        present[a] = false;
      }
      out.cycles.push_back(std::move(cycle));
    }
    std::erase_if(remaining, [&](std::size_t a) { return !present[a]; });
  }
  return out;
}

CoreSet ground_truth_core(const TtcOutcome& outcome) {
  CoreSet core;
  const std::size_t last = outcome.rounds();
  for (std::size_t a = 0; a < outcome.removal_round.size(); ++a) {
    if (outcome.removal_round[a] == last) core.members.push_back(static_cast<AgentId>(a + 1));
  }
  return core;
}

Allocation allocation_from_cycles(std::size_t n, const std::vector<TradingCycle>& cycles) {
  Allocation alloc;
  alloc.assignment.assign(n, 0);
  for (const auto& cycle : cycles) {
    const std::size_t k = cycle.agents.size();
    for (std::size_t j = 0; j < k; ++j) alloc.assignment.at(cycle.agents[j] - 1) = cycle.agents[(j + 1) % k];
  }
  return alloc;
}

namespace {

constexpr std::size_t kUnacceptable = std::numeric_limits<std::size_t>::max();

// rank[a][o]: 0-based preference position, L_a for an unlisted endowment,
// kUnacceptable otherwise.
std::vector<std::vector<std::size_t>> rank_table(const PreferenceProfile& profile) {
  const std::size_t n = profile.size();
  std::vector<std::vector<std::size_t>> rank(n, std::vector<std::size_t>(n + 1, kUnacceptable));
  for (std::size_t a = 0; a < n; ++a) {
    const auto& list = profile.lists()[a];
    for (std::size_t p = 0; p < list.size(); ++p) rank[a][list[p]] = p;
    if (rank[a][a + 1] == kUnacceptable) rank[a][a + 1] = list.size();
  }
  return rank;
}

}  // namespace

bool check_individual_rationality(const PreferenceProfile& profile, const Allocation& allocation) {
  const std::size_t n = profile.size();
  if (allocation.size() != n || !allocation.is_bijection()) return false;
  const auto rank = rank_table(profile);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t got = rank[a][allocation.assignment[a]];
    if (got == kUnacceptable || got > rank[a][a + 1]) return false;
  }
  return true;
}

bool check_pareto_bruteforce(const PreferenceProfile& profile, const Allocation& allocation) {
  const std::size_t n = profile.size();
  if (n > kParetoBruteForceMaxN) {
    throw std::invalid_argument("check_pareto_bruteforce: n = " + std::to_string(n) +
                                " exceeds the brute-force bound of " + std::to_string(kParetoBruteForceMaxN));
  }
  if (allocation.size() != n || !allocation.is_bijection()) return false;
  const auto rank = rank_table(profile);
  std::vector<ObjectId> perm(n);
  std::iota(perm.begin(), perm.end(), ObjectId{1});
  do {
    bool weakly_all = true;
    bool strictly_one = false;
    for (std::size_t a = 0; a < n && weakly_all; ++a) {
      const ObjectId now = allocation.assignment[a];
      const ObjectId alt = perm[a];
      if (alt == now) continue;
      const std::size_t r_alt = rank[a][alt];
      const std::size_t r_now = rank[a][now];
      if (r_alt == kUnacceptable || r_alt > r_now) {
        weakly_all = false;
      } else {
        strictly_one = true;
      }
    }
    if (weakly_all && strictly_one) return false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

double mean_normalized_rank(const PreferenceProfile& profile, const Allocation& allocation) {
  const std::size_t n = profile.size();
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const auto& list = profile.lists()[a];
    const ObjectId got = allocation.assignment.at(a);
    auto it = std::find(list.begin(), list.end(), got);
    std::size_t r = static_cast<std::size_t>(it - list.begin());
    if (it == list.end() && got != a + 1) continue;
    total += static_cast<double>(n - r) / static_cast<double>(n);
  }
  return total / static_cast<double>(n);
}

std::string to_json_string(const TtcOutcome& outcome) {
  nlohmann::json j;
  j["allocation"] = outcome.allocation.assignment;
  j["removal_round"] = outcome.removal_round;
  j["cycles"] = nlohmann::json::array();
  for (const auto& c : outcome.cycles) j["cycles"].push_back(nlohmann::json::array({c.round, c.agents}));
  return j.dump() + "\n";
}

}  // namespace ttcore
