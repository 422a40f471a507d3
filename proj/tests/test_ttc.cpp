#include <doctest.h>

#include <json.hpp>

#include "ttcore/ttc.hpp"

using namespace ttcore;

namespace {

PreferenceProfile worked_example() { return PreferenceProfile(3, {{2, 1, 3}, {1, 2, 3}, {1, 3, 2}}); }

}  // namespace

TEST_CASE("run_ttc on the worked example") {
  const auto out = run_ttc(worked_example());
  CHECK(out.allocation.assignment == std::vector<ObjectId>{2, 1, 3});
  CHECK(out.removal_round == std::vector<std::size_t>{1, 1, 2});
  REQUIRE(out.cycles.size() == 2);
  CHECK(out.cycles[0] == TradingCycle{1, {1, 2}});
  CHECK(out.cycles[1] == TradingCycle{2, {3}});
  CHECK(ground_truth_core(out).members == std::vector<AgentId>{3});
}

TEST_CASE("identity preferences give one round of self-cycles") {
  const PreferenceProfile p(4, {{1, 2, 3, 4}, {2, 1, 3, 4}, {3, 1, 2, 4}, {4, 3, 2, 1}});
  const auto out = run_ttc(p);
  CHECK(out.allocation.assignment == std::vector<ObjectId>{1, 2, 3, 4});
  CHECK(out.rounds() == 1);
  CHECK(out.cycles.size() == 4);
  CHECK(ground_truth_core(out).size() == 4);
}

TEST_CASE("rotation profile is a single 3-cycle") {
  const PreferenceProfile p(3, {{2, 1, 3}, {3, 2, 1}, {1, 3, 2}});
  const auto out = run_ttc(p);
  CHECK(out.allocation.assignment == std::vector<ObjectId>{2, 3, 1});
  REQUIRE(out.cycles.size() == 1);
  CHECK(out.cycles[0] == TradingCycle{1, {1, 2, 3}});
  CHECK(ground_truth_core(out).members == std::vector<AgentId>{1, 2, 3});
}

TEST_CASE("exhausted truncated lists point to self") {
  // Agent 3 only wants object 1, which leaves in round 1 with the (1,2) swap.
  const PreferenceProfile p(3, {{2}, {1}, {1}});
  const auto out = run_ttc(p);
  CHECK(out.allocation.assignment == std::vector<ObjectId>{2, 1, 3});
  CHECK(out.removal_round == std::vector<std::size_t>{1, 1, 2});
  CHECK(check_individual_rationality(p, out.allocation));
}

TEST_CASE("tail agents wait for later rounds") {
  // 1 -> 2 -> 3 -> 2: cycle (2,3) in round 1, agent 1 then takes its next choice.
  const PreferenceProfile p(3, {{2, 1, 3}, {3, 2, 1}, {2, 3, 1}});
  const auto out = run_ttc(p);
  CHECK(out.cycles[0] == TradingCycle{1, {2, 3}});
  CHECK(out.allocation.assignment == std::vector<ObjectId>{1, 3, 2});
  CHECK(out.removal_round[0] == 2);
}

TEST_CASE("individual rationality") {
  const auto p = worked_example();
  CHECK(check_individual_rationality(p, run_ttc(p).allocation));
  CHECK_FALSE(check_individual_rationality(p, Allocation{{3, 1, 2}}));
  CHECK(check_individual_rationality(p, Allocation{{1, 2, 3}}));
  CHECK_FALSE(check_individual_rationality(p, Allocation{{1, 1, 3}}));
  // Unlisted endowment ranks below every listed object.
  const PreferenceProfile truncated(3, {{2}, {1}, {2}});
  CHECK(check_individual_rationality(truncated, Allocation{{2, 1, 3}}));
  CHECK_FALSE(check_individual_rationality(truncated, Allocation{{3, 2, 1}}));
}

TEST_CASE("brute-force Pareto efficiency") {
  const auto p = worked_example();
  CHECK(check_pareto_bruteforce(p, run_ttc(p).allocation));
  CHECK_FALSE(check_pareto_bruteforce(p, Allocation{{1, 2, 3}}));
  CHECK(check_pareto_bruteforce(PreferenceProfile(1, {{1}}), Allocation{{1}}));
  CHECK_THROWS_AS(check_pareto_bruteforce(generate_random(9, 9, 1), Allocation{{1, 2, 3, 4, 5, 6, 7, 8, 9}}),
                  std::invalid_argument);
}

TEST_CASE("property: TTC outcome invariants on random profiles") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t n = 2 + seed % 7;
    const std::size_t L = (seed % 2) ? n : 1 + seed % n;
    const auto p = generate_random(n, L, seed);
    const auto out = run_ttc(p);
    CAPTURE(seed);
    CHECK(out.allocation.is_bijection());
    CHECK(check_individual_rationality(p, out.allocation));
    CHECK(allocation_from_cycles(n, out.cycles) == out.allocation);
    CHECK(run_ttc(p) == out);
    if (n <= 6) CHECK(check_pareto_bruteforce(p, out.allocation));

    // Each agent appears once; rounds are contiguous from 1.
    std::vector<int> seen(n, 0);
    std::size_t last_round = 0;
    for (const auto& c : out.cycles) {
      CHECK((c.round == last_round || c.round == last_round + 1));
      last_round = c.round;
      for (AgentId a : c.agents) ++seen[a - 1];
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));

    // Each agent gets its favourite among the objects still present in its round.
    for (AgentId a = 1; a <= n; ++a) {
      const std::size_t r = out.removal_round[a - 1];
      const ObjectId got = out.allocation.of(a);
      for (ObjectId o : p.list(a)) {
        if (o == got) break;
        CHECK(out.removal_round[o - 1] < r);
      }
    }
  }
}

TEST_CASE("welfare and JSON") {
  const auto p = worked_example();
  const auto out = run_ttc(p);
  // Agents 1 and 2 get their first choice, agent 3 its second: (1 + 1 + 2/3)/3.
  CHECK(mean_normalized_rank(p, out.allocation) == doctest::Approx((1.0 + 1.0 + 2.0 / 3.0) / 3.0));
  const auto j = nlohmann::json::parse(to_json_string(out));
  CHECK(j["allocation"] == nlohmann::json({2, 1, 3}));
  CHECK(j["removal_round"] == nlohmann::json({1, 1, 2}));
  CHECK(j["cycles"][1] == nlohmann::json::parse("[2,[3]]"));
}
