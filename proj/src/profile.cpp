#include "ttcore/profile.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace ttcore {

std::size_t PreferenceProfile::max_list_length() const {
  std::size_t longest = 0;
  for (const auto& l : lists_) longest = std::max(longest, l.size());
  return longest;
}

bool PreferenceProfile::is_complete() const {
  return std::all_of(lists_.begin(), lists_.end(), [&](const auto& l) { return l.size() == n_; });
}

bool Allocation::is_bijection() const {
  const std::size_t n = assignment.size();
  std::vector<bool> seen(n + 1, false);
  for (ObjectId o : assignment) {
    if (o < 1 || o > n || seen[o]) return false;
    seen[o] = true;
  }
  return true;
}

std::optional<Violation> validate(const PreferenceProfile& profile) {
  const std::size_t n = profile.size();
  if (n == 0) return Violation{0, "no agents"};
  if (profile.lists().size() != n) {
    return Violation{0, "expected " + std::to_string(n) + " preference lists, got " +
                            std::to_string(profile.lists().size())};
  }
  if (profile.null_count() >= n) {
    return Violation{0, "null_count must be smaller than n"};
  }
  std::vector<std::size_t> seen_in(n + 1, 0);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& list = profile.lists()[a];
    const auto agent = static_cast<AgentId>(a + 1);
    if (list.empty()) return Violation{agent, "empty preference list"};
    if (list.size() > n) return Violation{agent, "list longer than n"};
    for (ObjectId o : list) {
      if (o < 1 || o > n) {
        return Violation{agent, "object id " + std::to_string(o) + " outside [1, " + std::to_string(n) + "]"};
      }
      if (seen_in[o] == agent) return Violation{agent, "duplicate object " + std::to_string(o)};
      seen_in[o] = agent;
    }
  }
  return std::nullopt;
}

void require_valid(const PreferenceProfile& profile) {
  if (auto v = validate(profile)) {
    if (v->agent == 0) throw ProfileError("invalid profile: " + v->rule);
    throw ProfileError("invalid profile: agent " + std::to_string(v->agent) + ": " + v->rule);
  }
}

PreferenceProfile generate_random(std::size_t n, std::size_t L, std::uint64_t seed) {
  if (n == 0) throw ProfileError("generate_random: n must be positive");
  if (L < 1 || L > n) throw ProfileError("generate_random: L must lie in [1, n]");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<ObjectId>> lists(n);
  std::vector<ObjectId> perm(n);
  for (auto& list : lists) {
    std::iota(perm.begin(), perm.end(), ObjectId{1});
    // Partial Fisher-Yates: only the first L positions are needed.
    for (std::size_t i = 0; i < L; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(perm[i], perm[pick(rng)]);
    }
    list.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(L));
  }
  return PreferenceProfile(n, std::move(lists));
}

PreferenceProfile generate_from_utility(std::size_t n, const UtilityFn& utility) {
  if (n == 0) throw ProfileError("generate_from_utility: n must be positive");
  std::vector<std::vector<ObjectId>> lists(n);
  std::vector<double> u(n + 1);
  for (std::size_t a = 1; a <= n; ++a) {
    const auto agent = static_cast<AgentId>(a);
    for (std::size_t o = 1; o <= n; ++o) u[o] = utility(agent, static_cast<ObjectId>(o));
    auto& list = lists[a - 1];
    list.resize(n);
    std::iota(list.begin(), list.end(), ObjectId{1});
    std::stable_sort(list.begin(), list.end(), [&](ObjectId x, ObjectId y) { return u[x] > u[y]; });
    for (std::size_t p = 1; p < n; ++p) {
      if (!(u[list[p - 1]] > u[list[p]])) {
        auto lo = std::min(list[p - 1], list[p]);
        auto hi = std::max(list[p - 1], list[p]);
        throw ProfileError("generate_from_utility: agent " + std::to_string(a) + " has tied objects " +
                           std::to_string(lo) + " and " + std::to_string(hi));
      }
    }
  }
  return PreferenceProfile(n, std::move(lists));
}

NullPlacement NullPlacement::last(std::span<const std::vector<ObjectId>> lists) {
  NullPlacement p;
  p.position.reserve(lists.size());
  for (const auto& l : lists) p.position.push_back(l.size());
  return p;
}

PreferenceProfile pad_null(std::span<const std::vector<ObjectId>> lists, std::size_t objects,
                           const NullPlacement& placement) {
  const std::size_t agents = lists.size();
  if (objects > agents) throw ProfileError("pad_null: more objects than agents");
  if (objects == 0) throw ProfileError("pad_null: at least one real object required");
  for (std::size_t a = 0; a < agents; ++a) {
    for (ObjectId o : lists[a]) {
      if (o < 1 || o > objects) {
        throw ProfileError("pad_null: agent " + std::to_string(a + 1) + " lists object " +
                           std::to_string(o) + " outside [1, " + std::to_string(objects) + "]");
      }
    }
  }
  std::vector<std::vector<ObjectId>> out(lists.begin(), lists.end());
  const std::size_t nulls = agents - objects;
  if (nulls > 0) {
    if (placement.position.size() != agents) throw ProfileError("pad_null: placement needs one entry per agent");
    for (std::size_t a = 0; a < agents; ++a) {
      const std::size_t pos = placement.position[a];
      if (pos > out[a].size()) {
        throw ProfileError("pad_null: placement " + std::to_string(pos) + " for agent " +
                           std::to_string(a + 1) + " exceeds list length " + std::to_string(out[a].size()));
      }
      std::vector<ObjectId> block(nulls);
      std::iota(block.begin(), block.end(), static_cast<ObjectId>(objects + 1));
      out[a].insert(out[a].begin() + static_cast<std::ptrdiff_t>(pos), block.begin(), block.end());
    }
  }
  PreferenceProfile profile(agents, std::move(out), nulls);
  require_valid(profile);
  return profile;
}

}  // namespace ttcore
