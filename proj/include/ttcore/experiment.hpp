#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ttcore/core_id.hpp"
#include "ttcore/markov.hpp"
#include "ttcore/profile.hpp"

namespace ttcore {

struct KPolicy {
  enum class Kind { ground_truth, fixed } kind = Kind::ground_truth;
  std::size_t k = 1;
};

struct ExperimentConfig {
  std::vector<std::size_t> n_values;
  std::size_t L = 0;  // 0: complete lists
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::vector<ScoreMode> modes{ScoreMode::right_singular};
  std::vector<Convention> conventions{Convention::example};
  SolverKind solver = SolverKind::power;
  std::vector<double> noise_levels;
  NoiseModel noise_model = NoiseModel::score;
  KPolicy k_policy;
  // Used for every trial instead of a generated profile (n_values must be {its n}).
  std::optional<PreferenceProfile> fixed_profile;
  bool timing = true;
  std::size_t full_factorization_max_n = 2000;
  PowerOptions power;
  std::size_t oversampling = 7;
  std::size_t power_iters = 2;
};

// Throws std::invalid_argument on an inconsistent config.
void check_config(const ExperimentConfig& config);

ExperimentConfig config_from_json(const std::string& text);

// Mode column value: "stationary", "singular", "singular-rsvd" or "singular-svd".
std::string mode_label(ScoreMode mode, SolverKind solver);

// Seed for the trial-th instance: base seed + trial index.
std::uint64_t trial_seed(std::uint64_t base, std::size_t trial);
// Independent stream derived from a trial seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct ExperimentRecord {
  std::size_t n = 0;
  std::size_t L = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string mode;
  Convention convention = Convention::example;
  double noise = 0.0;
  bool failed = false;
  double precision = 0.0;
  double recall = 0.0;
  bool exact = false;
  double rank_corr = 0.0;  // NaN when undefined
  std::optional<double> time_spectral_ms;
  std::optional<double> time_ttc_ms;
  std::size_t solver_iters = 0;
  std::size_t threads = 1;
  double welfare = 0.0;
  double angle = 0.0;  // radians between noisy and noiseless leading vectors; NaN outside noise sweeps

  bool operator==(const ExperimentRecord&) const;
};

struct AggregateRow {
  std::size_t n = 0;
  std::size_t L = 0;
  std::string mode;
  Convention convention = Convention::example;
  double noise = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t matches = 0;
  double match_rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_rank_corr = 0.0;
  std::optional<double> mean_spectral_ms;
  std::optional<double> mean_ttc_ms;
  std::optional<double> speedup;
  double mean_welfare = 0.0;
  double median_angle = 0.0;

  bool operator==(const AggregateRow&) const;
};

struct ExperimentReport {
  std::vector<ExperimentRecord> records;
  std::vector<AggregateRow> aggregates;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// 95% Wilson score interval.
Interval wilson_interval(std::size_t successes, std::size_t trials);

// Groups by (n, L, mode, convention, noise) in order of first appearance.
std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records);

ExperimentReport run_accuracy(const ExperimentConfig& config);
ExperimentReport run_noise_sweep(const ExperimentConfig& config);

std::string records_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> parse_records_csv(const std::string& text);
std::string aggregates_csv(const std::vector<AggregateRow>& rows);

struct TimingRow {
  std::size_t n = 0;
  std::size_t L = 0;
  std::string path;  // ttc, core_id, randomized, power, stationary, dense_svd
  std::size_t trials = 0;
  std::size_t failures = 0;
  double median_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
  std::optional<double> speedup_vs_ttc;
};

struct TimingReport {
  std::vector<TimingRow> rows;
  double timer_resolution_ns = 0.0;
  std::string isa;
};

// Median wall-clock per path over config.trials instances after one
// discarded warmup run. Paths run serially.
TimingReport run_timing(const ExperimentConfig& config);

std::string timing_csv(const TimingReport& report);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ttcore
