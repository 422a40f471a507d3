#include <doctest.h>

#include <cmath>
#include <set>

#include "ttcore/experiment.hpp"

using namespace ttcore;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n_values = {10, 20};
  c.trials = 8;
  c.seed = 3;
  c.modes = {ScoreMode::stationary, ScoreMode::right_singular};
  c.conventions = {Convention::example, Convention::theorem};
  return c;
}

}  // namespace

TEST_CASE("wilson_interval") {
  auto i = wilson_interval(7, 10);
  CHECK(i.low == doctest::Approx(0.39677814746114537).epsilon(1e-12));
  CHECK(i.high == doctest::Approx(0.8922087325936989).epsilon(1e-12));
  i = wilson_interval(0, 10);
  CHECK(i.low == doctest::Approx(0.0));
  CHECK(i.high == doctest::Approx(0.2775327998628892).epsilon(1e-12));
  i = wilson_interval(37, 100);
  CHECK(i.low == doctest::Approx(0.28182360534324524).epsilon(1e-12));
  CHECK(i.high == doctest::Approx(0.4677947041905709).epsilon(1e-12));
  CHECK(wilson_interval(100, 100).high == doctest::Approx(1.0));
}

TEST_CASE("check_config") {
  ExperimentConfig c;
  CHECK_THROWS_AS(check_config(c), std::invalid_argument);
  c.n_values = {1};
  CHECK_THROWS_AS(check_config(c), std::invalid_argument);
  c.n_values = {5};
  CHECK_NOTHROW(check_config(c));
  c.trials = 0;
  CHECK_THROWS_AS(check_config(c), std::invalid_argument);
  c.trials = 1;
  c.noise_levels = {1.2};
  CHECK_THROWS_AS(check_config(c), std::invalid_argument);
}

TEST_CASE("config_from_json") {
  const auto c = config_from_json(
      R"({"n_values":[10,50],"L":4,"trials":7,"seed":9,"modes":["stationary","singular"],)"
      R"("conventions":["theorem"],"solver":"randomized","noise_levels":[0,0.1],"k":2,"timing":false})");
  CHECK(c.n_values == std::vector<std::size_t>{10, 50});
  CHECK(c.L == 4);
  CHECK(c.trials == 7);
  CHECK(c.seed == 9);
  CHECK(c.modes.size() == 2);
  CHECK(c.conventions == std::vector<Convention>{Convention::theorem});
  CHECK(c.solver == SolverKind::randomized);
  CHECK(c.k_policy.kind == KPolicy::Kind::fixed);
  CHECK(c.k_policy.k == 2);
  CHECK_FALSE(c.timing);
}

TEST_CASE("run_accuracy on the worked example") {
  ExperimentConfig c;
  c.n_values = {3};
  c.trials = 5;
  c.fixed_profile = PreferenceProfile(3, {{2, 1, 3}, {1, 2, 3}, {1, 3, 2}});
  c.timing = false;
  const auto report = run_accuracy(c);
  REQUIRE(report.records.size() == 5);
  for (const auto& r : report.records) {
    CHECK(r.exact);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.mode == "singular");
  }
  REQUIRE(report.aggregates.size() == 1);
  CHECK(report.aggregates[0].match_rate == 1.0);
}

TEST_CASE("run_accuracy records") {
  auto c = small_config();
  c.timing = false;
  const auto report = run_accuracy(c);
  CHECK(report.records.size() == 2 * 8 * 2 * 2);
  CHECK(report.aggregates.size() == 2 * 2 * 2);

  SUBCASE("byte-identical reruns without timing") {
    CHECK(records_csv(report.records) == records_csv(run_accuracy(c).records));
    CHECK(aggregates_csv(report.aggregates) == aggregates_csv(run_accuracy(c).aggregates));
  }
  SUBCASE("CSV round trip reproduces the aggregate table") {
    const auto parsed = parse_records_csv(records_csv(report.records));
    CHECK(parsed == report.records);
    CHECK(aggregates_csv(aggregate(parsed)) == aggregates_csv(report.aggregates));
  }
  SUBCASE("ordering and seeds") {
    for (std::size_t i = 1; i < report.records.size(); ++i) CHECK(report.records[i - 1].n <= report.records[i].n);
    for (const auto& r : report.records) CHECK(r.seed == trial_seed(c.seed, r.trial));
  }
}

TEST_CASE("run_accuracy with timing at n = 10") {
  ExperimentConfig c;
  c.n_values = {10};
  c.trials = 100;
  c.modes = {ScoreMode::stationary, ScoreMode::right_singular};
  c.conventions = {Convention::example, Convention::theorem};
  const auto report = run_accuracy(c);
  for (const auto& a : report.aggregates) {
    CHECK((a.match_rate >= 0.0 && a.match_rate <= 1.0));
    CHECK(a.ci_low <= a.match_rate);
    CHECK(a.match_rate <= a.ci_high);
    REQUIRE(a.mean_spectral_ms);
    CHECK(*a.mean_spectral_ms > 0.0);
    REQUIRE(a.mean_ttc_ms);
    CHECK(*a.mean_ttc_ms > 0.0);
  }
  for (const auto& r : report.records) {
    CHECK_FALSE(r.failed);
    CHECK(r.time_spectral_ms.has_value());
    CHECK(r.threads == 1);
  }
}

TEST_CASE("run_noise_sweep") {
  auto c = small_config();
  c.timing = false;
  c.noise_levels = {0.0, 0.05, 0.2};
  const auto sweep = run_noise_sweep(c);
  CHECK(sweep.records.size() == 2 * 8 * 2 * 2 * 3);

  SUBCASE("level zero reproduces the accuracy harness") {
    const auto accuracy = run_accuracy(c);
    std::size_t matched = 0;
    for (const auto& r : sweep.records) {
      if (r.noise != 0.0) continue;
      for (const auto& a : accuracy.records) {
        if (a.n == r.n && a.trial == r.trial && a.mode == r.mode && a.convention == r.convention) {
          CHECK(a.precision == r.precision);
          CHECK(a.recall == r.recall);
          CHECK(a.exact == r.exact);
          CHECK(r.angle == 0.0);
          ++matched;
        }
      }
    }
    CHECK(matched == accuracy.records.size());
  }
  SUBCASE("one series per noise level") {
    std::set<double> levels;
    for (const auto& a : sweep.aggregates) levels.insert(a.noise);
    CHECK(levels.size() == 3);
  }
  SUBCASE("rank model") {
    c.noise_model = NoiseModel::rank;
    CHECK(run_noise_sweep(c).records.size() == sweep.records.size());
  }
  SUBCASE("empty level list") {
    c.noise_levels.clear();
    CHECK_THROWS_AS(run_noise_sweep(c), std::invalid_argument);
  }
}

TEST_CASE("run_timing") {
  ExperimentConfig c;
  c.n_values = {2, 400};
  c.trials = 3;
  const auto report = run_timing(c);
  CHECK(report.timer_resolution_ns > 0.0);
  CHECK_FALSE(report.isa.empty());
  double rsvd = -1, svd = -1;
  for (const auto& row : report.rows) {
    CHECK(row.failures == 0);
    CHECK(row.min_ms <= row.median_ms);
    CHECK(row.median_ms <= row.max_ms);
    if (row.n == 2) CHECK(row.median_ms < 10.0);
    if (row.n == 400 && row.path == "randomized") rsvd = row.median_ms;
    if (row.n == 400 && row.path == "dense_svd") svd = row.median_ms;
  }
  REQUIRE(rsvd > 0.0);
  REQUIRE(svd > 0.0);
  CHECK(rsvd <= svd);
  CHECK(timing_csv(report).rfind("n,L,path", 0) == 0);
}

TEST_CASE("loglog_slope") {
  CHECK(loglog_slope({1, 10, 100}, {3, 300, 30000}) == doctest::Approx(2.0));
  CHECK(loglog_slope({2, 4, 8}, {5, 10, 20}) == doctest::Approx(1.0));
}

TEST_CASE("seeds") {
  CHECK(trial_seed(10, 3) == 13);
  CHECK(derive_seed(1, 1) != derive_seed(1, 2));
  CHECK(derive_seed(1, 1) == derive_seed(1, 1));
  CHECK(mode_label(ScoreMode::right_singular, SolverKind::randomized) == "singular-rsvd");
  CHECK(mode_label(ScoreMode::stationary, SolverKind::randomized) == "stationary");
}
