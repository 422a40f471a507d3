#include "ttcore/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "ttcore/kernels.hpp"
#include "ttcore/ttc.hpp"

namespace ttcore {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same(*a, *b);
}

std::string num(double v) {
  if (std::isnan(v)) return {};
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

double parse_double(std::string_view s) {
  if (s.empty()) return kNaN;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad number: " + std::string(s));
  return v;
}

template <typename T>
T parse_uint(std::string_view s) {
  T v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad integer: " + std::string(s));
  return v;
}

std::vector<std::string_view> split(std::string_view row) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= row.size(); ++i) {
    if (i == row.size() || row[i] == ',') {
      out.push_back(row.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::size_t effective_L(const ExperimentConfig& c, std::size_t n) {
  return c.L == 0 ? n : std::min(c.L, n);
}

CoreOptions core_options(const ExperimentConfig& c, ScoreMode mode, Convention conv, std::uint64_t seed) {
  CoreOptions o;
  o.mode = mode;
  o.solver = c.solver;
  o.convention = conv;
  o.power = c.power;
  o.randomized.oversampling = c.oversampling;
  o.randomized.power_iters = c.power_iters;
  o.randomized.seed = derive_seed(seed, 0x51D);
  return o;
}

ScoreMode parse_mode(const std::string& s) {
  if (s == "stationary") return ScoreMode::stationary;
  if (s == "singular") return ScoreMode::right_singular;
  throw std::invalid_argument("unknown mode: " + s);
}

Convention parse_convention(const std::string& s) {
  if (s == "example") return Convention::example;
  if (s == "theorem") return Convention::theorem;
  throw std::invalid_argument("unknown convention: " + s);
}

SolverKind parse_solver(const std::string& s) {
  if (s == "power") return SolverKind::power;
  if (s == "randomized") return SolverKind::randomized;
  if (s == "dense_svd") return SolverKind::dense_svd;
  throw std::invalid_argument("unknown solver: " + s);
}

struct TrialBase {
  PreferenceProfile profile;
  TtcOutcome outcome;
  CoreSet truth;
  std::size_t k = 1;
  double ttc_ms = 0.0;
  double welfare = 0.0;
};

TrialBase prepare_trial(const ExperimentConfig& c, std::size_t n, std::uint64_t seed) {
  TrialBase t;
  t.profile = c.fixed_profile ? *c.fixed_profile : generate_random(n, effective_L(c, n), seed);
  const auto start = Clock::now();
  t.outcome = run_ttc(t.profile);
  t.truth = ground_truth_core(t.outcome);
  t.ttc_ms = elapsed_ms(start);
  t.k = c.k_policy.kind == KPolicy::Kind::ground_truth ? t.truth.size() : c.k_policy.k;
  t.welfare = mean_normalized_rank(t.profile, t.outcome.allocation);
  return t;
}

ExperimentRecord base_record(const ExperimentConfig& c, const TrialBase& t, std::size_t trial, std::uint64_t seed,
                             ScoreMode mode, Convention conv, double noise) {
  ExperimentRecord r;
  r.n = t.profile.size();
  r.L = t.profile.max_list_length();
  r.trial = trial;
  r.seed = seed;
  r.mode = mode_label(mode, c.solver);
  r.convention = conv;
  r.noise = noise;
  r.welfare = t.welfare;
  r.angle = kNaN;
  if (c.timing) r.time_ttc_ms = t.ttc_ms;
  return r;
}

void fill_metrics(ExperimentRecord& r, const CoreEstimate& est, const TrialBase& t) {
  const MatchMetrics mm = compare_to_truth(est, t.truth, t.outcome);
  r.precision = mm.precision;
  r.recall = mm.recall;
  r.exact = mm.exact;
  r.rank_corr = mm.rank_correlation;
}

void mark_failed(ExperimentRecord& r) {
  r.failed = true;
  r.precision = r.recall = r.rank_corr = kNaN;
  r.exact = false;
}

// Orders records by (n, mode, convention, noise level, trial).
struct OrderedRecords {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>> keys;
  std::vector<ExperimentRecord> rows;

  void add(std::size_t ni, std::size_t mi, std::size_t ci, std::size_t li, std::size_t trial, ExperimentRecord r) {
    keys.emplace_back(ni, mi, ci, li, trial);
    rows.push_back(std::move(r));
  }

  std::vector<ExperimentRecord> sorted() && {
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<ExperimentRecord> out;
    out.reserve(rows.size());
    for (std::size_t i : idx) out.push_back(std::move(rows[i]));
    return out;
  }
};

}  // namespace

bool ExperimentRecord::operator==(const ExperimentRecord& o) const {
  return n == o.n && L == o.L && trial == o.trial && seed == o.seed && mode == o.mode && convention == o.convention &&
         same(noise, o.noise) && failed == o.failed && same(precision, o.precision) && same(recall, o.recall) &&
         exact == o.exact && same(rank_corr, o.rank_corr) && same(time_spectral_ms, o.time_spectral_ms) &&
         same(time_ttc_ms, o.time_ttc_ms) && solver_iters == o.solver_iters && threads == o.threads &&
         same(welfare, o.welfare) && same(angle, o.angle);
}

bool AggregateRow::operator==(const AggregateRow& o) const {
  return n == o.n && L == o.L && mode == o.mode && convention == o.convention && same(noise, o.noise) &&
         trials == o.trials && failures == o.failures && matches == o.matches && same(match_rate, o.match_rate) &&
         same(ci_low, o.ci_low) && same(ci_high, o.ci_high) && same(mean_precision, o.mean_precision) &&
         same(mean_recall, o.mean_recall) && same(mean_rank_corr, o.mean_rank_corr) &&
         same(mean_spectral_ms, o.mean_spectral_ms) && same(mean_ttc_ms, o.mean_ttc_ms) && same(speedup, o.speedup) &&
         same(mean_welfare, o.mean_welfare) && same(median_angle, o.median_angle);
}

void check_config(const ExperimentConfig& c) {
  if (c.n_values.empty()) throw std::invalid_argument("config: n_values must be nonempty");
  if (c.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (c.modes.empty() || c.conventions.empty()) throw std::invalid_argument("config: need at least one mode and convention");
  for (std::size_t n : c.n_values)
    if (n < 2) throw std::invalid_argument("config: every n must be >= 2");
  for (double eta : c.noise_levels)
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("config: noise levels must lie in [0, 1]");
  if (c.k_policy.kind == KPolicy::Kind::fixed && c.k_policy.k < 1) throw std::invalid_argument("config: k must be >= 1");
  if (c.fixed_profile) {
    require_valid(*c.fixed_profile);
    if (c.n_values.size() != 1 || c.n_values.front() != c.fixed_profile->size())
      throw std::invalid_argument("config: n_values must equal the fixed profile's n");
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentConfig c;
  if (j.contains("n_values")) c.n_values = j["n_values"].get<std::vector<std::size_t>>();
  if (j.contains("L")) c.L = j["L"].get<std::size_t>();
  if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("modes")) {
    c.modes.clear();
    for (const auto& m : j["modes"]) c.modes.push_back(parse_mode(m.get<std::string>()));
  }
  if (j.contains("conventions")) {
    c.conventions.clear();
    for (const auto& m : j["conventions"]) c.conventions.push_back(parse_convention(m.get<std::string>()));
  }
  if (j.contains("solver")) c.solver = parse_solver(j["solver"].get<std::string>());
  if (j.contains("noise_levels")) c.noise_levels = j["noise_levels"].get<std::vector<double>>();
  if (j.contains("noise_model")) {
    const auto m = j["noise_model"].get<std::string>();
    if (m != "score" && m != "rank") throw std::invalid_argument("unknown noise model: " + m);
    c.noise_model = m == "score" ? NoiseModel::score : NoiseModel::rank;
  }
  if (j.contains("k") && !j["k"].is_null()) {
    c.k_policy.kind = KPolicy::Kind::fixed;
    c.k_policy.k = j["k"].get<std::size_t>();
  }
  if (j.contains("timing")) c.timing = j["timing"].get<bool>();
  if (j.contains("oversampling")) c.oversampling = j["oversampling"].get<std::size_t>();
  if (j.contains("power_iters")) c.power_iters = j["power_iters"].get<std::size_t>();
  return c;
}

std::string mode_label(ScoreMode mode, SolverKind solver) {
  if (mode == ScoreMode::stationary) return "stationary";
  switch (solver) {
    case SolverKind::randomized:
      return "singular-rsvd";
    case SolverKind::dense_svd:
      return "singular-svd";
    case SolverKind::power:
      break;
  }
  return "singular";
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) { return base + trial; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Interval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {kNaN, kNaN};
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double denom = 1.0 + z * z / nt;
  const double centre = (p + z * z / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z * z / (4.0 * nt * nt)) / denom;
  if (successes == 0) return {0.0, std::min(1.0, centre + half)};
  if (successes == trials) return {std::max(0.0, centre - half), 1.0};
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records) {
  struct Acc {
    AggregateRow row;
    std::vector<double> precision, recall, rank, spectral, ttc, welfare, angle;
  };
  std::vector<Acc> groups;
  auto find = [&](const ExperimentRecord& r) -> Acc& {
    for (auto& g : groups) {
      if (g.row.n == r.n && g.row.L == r.L && g.row.mode == r.mode && g.row.convention == r.convention &&
          same(g.row.noise, r.noise))
        return g;
    }
    Acc& g = groups.emplace_back();
    g.row.n = r.n;
    g.row.L = r.L;
    g.row.mode = r.mode;
    g.row.convention = r.convention;
    g.row.noise = r.noise;
    return g;
  };
  for (const auto& r : records) {
    Acc& g = find(r);
    ++g.row.trials;
    g.welfare.push_back(r.welfare);
    if (r.failed) {
      ++g.row.failures;
      continue;
    }
    if (r.exact) ++g.row.matches;
    g.precision.push_back(r.precision);
    g.recall.push_back(r.recall);
    if (!std::isnan(r.rank_corr)) g.rank.push_back(r.rank_corr);
    if (r.time_spectral_ms) g.spectral.push_back(*r.time_spectral_ms);
    if (r.time_ttc_ms) g.ttc.push_back(*r.time_ttc_ms);
    if (!std::isnan(r.angle)) g.angle.push_back(r.angle);
  }
  std::vector<AggregateRow> out;
  for (auto& g : groups) {
    AggregateRow& a = g.row;
    a.match_rate = static_cast<double>(a.matches) / static_cast<double>(a.trials);
    const Interval ci = wilson_interval(a.matches, a.trials);
    a.ci_low = ci.low;
    a.ci_high = ci.high;
    a.mean_precision = mean_of(g.precision);
    a.mean_recall = mean_of(g.recall);
    a.mean_rank_corr = mean_of(g.rank);
    if (!g.spectral.empty()) a.mean_spectral_ms = mean_of(g.spectral);
    if (!g.ttc.empty()) a.mean_ttc_ms = mean_of(g.ttc);
    if (a.mean_spectral_ms && a.mean_ttc_ms && *a.mean_spectral_ms > 0.0) a.speedup = *a.mean_ttc_ms / *a.mean_spectral_ms;
    a.mean_welfare = mean_of(g.welfare);
    a.median_angle = median_of(g.angle);
    out.push_back(a);
  }
  return out;
}

ExperimentReport run_accuracy(const ExperimentConfig& c) {
  check_config(c);
  OrderedRecords ordered;
  for (std::size_t ni = 0; ni < c.n_values.size(); ++ni) {
    const std::size_t n = c.n_values[ni];
    for (std::size_t trial = 0; trial < c.trials; ++trial) {
      const std::uint64_t seed = trial_seed(c.seed, trial);
      const TrialBase t = prepare_trial(c, n, seed);
      for (std::size_t mi = 0; mi < c.modes.size(); ++mi) {
        for (std::size_t ci = 0; ci < c.conventions.size(); ++ci) {
          ExperimentRecord r = base_record(c, t, trial, seed, c.modes[mi], c.conventions[ci], 0.0);
          const CoreOptions opts = core_options(c, c.modes[mi], c.conventions[ci], seed);
          try {
            const auto start = Clock::now();
            const StochasticMatrix m = markov_matrix(t.profile);
            const SpectralScore s = compute_spectral(m, opts);
            const CoreEstimate est = identify_core_topk(score_agents(s, opts.convention), t.k, opts.mode, opts.convention);
            const double ms = elapsed_ms(start);
            if (c.timing) r.time_spectral_ms = ms;
            r.solver_iters = s.iterations;
            fill_metrics(r, est, t);
          } catch (const std::exception&) {
            mark_failed(r);
          }
          ordered.add(ni, mi, ci, 0, trial, std::move(r));
        }
      }
    }
  }
  ExperimentReport report;
  report.records = std::move(ordered).sorted();
  report.aggregates = aggregate(report.records);
  return report;
}

ExperimentReport run_noise_sweep(const ExperimentConfig& c) {
  check_config(c);
  if (c.noise_levels.empty()) throw std::invalid_argument("noise sweep: noise_levels must be nonempty");
  OrderedRecords ordered;
  for (std::size_t ni = 0; ni < c.n_values.size(); ++ni) {
    const std::size_t n = c.n_values[ni];
    for (std::size_t trial = 0; trial < c.trials; ++trial) {
      const std::uint64_t seed = trial_seed(c.seed, trial);
      const TrialBase t = prepare_trial(c, n, seed);
      const StochasticMatrix clean = markov_matrix(t.profile);
      for (std::size_t mi = 0; mi < c.modes.size(); ++mi) {
        for (std::size_t ci = 0; ci < c.conventions.size(); ++ci) {
          const CoreOptions opts = core_options(c, c.modes[mi], c.conventions[ci], seed);
          std::optional<SpectralScore> reference;
          try {
            reference = compute_spectral(clean, opts);
          } catch (const std::exception&) {
          }
          for (std::size_t li = 0; li < c.noise_levels.size(); ++li) {
            const double eta = c.noise_levels[li];
            ExperimentRecord r = base_record(c, t, trial, seed, c.modes[mi], c.conventions[ci], eta);
            try {
              const auto start = Clock::now();
              const StochasticMatrix m = eta == 0.0 ? markov_matrix(t.profile)
                                                    : perturb(t.profile, clean, eta, c.noise_model, derive_seed(seed, li + 1));
              const SpectralScore s = compute_spectral(m, opts);
              const CoreEstimate est = identify_core_topk(score_agents(s, opts.convention), t.k, opts.mode, opts.convention);
              const double ms = elapsed_ms(start);
              if (c.timing) r.time_spectral_ms = ms;
              r.solver_iters = s.iterations;
              fill_metrics(r, est, t);
              if (reference) r.angle = line_angle(s.values, reference->values);
            } catch (const std::exception&) {
              mark_failed(r);
            }
            ordered.add(ni, mi, ci, li, trial, std::move(r));
          }
        }
      }
    }
  }
  ExperimentReport report;
  report.records = std::move(ordered).sorted();
  report.aggregates = aggregate(report.records);
  return report;
}

namespace {
constexpr std::string_view kRecordHeader =
    "n,L,trial,seed,mode,convention,noise,precision,recall,exact,rank_corr,time_spectral_ms,time_ttc_ms,"
    "solver_iters,threads,welfare,angle";
}

std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::string out(kRecordHeader);
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.n) + ',' + std::to_string(r.L) + ',' + std::to_string(r.trial) + ',' +
           std::to_string(r.seed) + ',' + r.mode + ',' + to_string(r.convention) + ',' + num(r.noise) + ',';
    if (r.failed) {
      out += ",,,";
    } else {
      out += num(r.precision) + ',' + num(r.recall) + ',' + (r.exact ? "1" : "0") + ',' + num(r.rank_corr);
    }
    out += ',' + num(r.time_spectral_ms) + ',' + num(r.time_ttc_ms) + ',' + std::to_string(r.solver_iters) + ',' +
           std::to_string(r.threads) + ',' + num(r.welfare) + ',' + num(r.angle) + '\n';
  }
  return out;
}

std::vector<ExperimentRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) throw std::invalid_argument("records CSV: unexpected header");
  std::vector<ExperimentRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 17) throw std::invalid_argument("records CSV: expected 17 fields");
    ExperimentRecord r;
    r.n = parse_uint<std::size_t>(f[0]);
    r.L = parse_uint<std::size_t>(f[1]);
    r.trial = parse_uint<std::size_t>(f[2]);
    r.seed = parse_uint<std::uint64_t>(f[3]);
    r.mode = std::string(f[4]);
    r.convention = parse_convention(std::string(f[5]));
    r.noise = parse_double(f[6]);
    r.failed = f[9].empty();
    r.precision = parse_double(f[7]);
    r.recall = parse_double(f[8]);
    r.exact = f[9] == "1";
    r.rank_corr = parse_double(f[10]);
    if (!f[11].empty()) r.time_spectral_ms = parse_double(f[11]);
    if (!f[12].empty()) r.time_ttc_ms = parse_double(f[12]);
    r.solver_iters = parse_uint<std::size_t>(f[13]);
    r.threads = parse_uint<std::size_t>(f[14]);
    r.welfare = parse_double(f[15]);
    r.angle = parse_double(f[16]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string aggregates_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "n,L,mode,convention,noise,trials,failures,matches,match_pct,ci_low_pct,ci_high_pct,mean_precision,"
      "mean_recall,mean_rank_corr,spectral_ms,ttc_ms,speedup,welfare,median_angle\n";
  for (const auto& a : rows) {
    out += std::to_string(a.n) + ',' + std::to_string(a.L) + ',' + a.mode + ',' + to_string(a.convention) + ',' +
           num(a.noise) + ',' + std::to_string(a.trials) + ',' + std::to_string(a.failures) + ',' +
           std::to_string(a.matches) + ',' + num(100.0 * a.match_rate) + ',' + num(100.0 * a.ci_low) + ',' +
           num(100.0 * a.ci_high) + ',' + num(a.mean_precision) + ',' + num(a.mean_recall) + ',' +
           num(a.mean_rank_corr) + ',' + num(a.mean_spectral_ms) + ',' + num(a.mean_ttc_ms) + ',' + num(a.speedup) +
           ',' + num(a.mean_welfare) + ',' + num(a.median_angle) + '\n';
  }
  return out;
}

TimingReport run_timing(const ExperimentConfig& c) {
  check_config(c);
  TimingReport report;
  report.timer_resolution_ns =
      1e9 * static_cast<double>(Clock::period::num) / static_cast<double>(Clock::period::den);
  report.isa = std::string(kernels::isa_name(kernels::active().isa));

  const char* paths[] = {"ttc", "core_id", "randomized", "power", "stationary", "dense_svd"};
  for (std::size_t n : c.n_values) {
    const std::size_t L = effective_L(c, n);
    std::map<std::string, std::vector<double>> times;
    std::map<std::string, std::size_t> failures;
    for (std::size_t trial = 0; trial <= c.trials; ++trial) {
      const bool warmup = trial == 0;
      const std::uint64_t seed = trial_seed(c.seed, warmup ? 0 : trial - 1);
      const PreferenceProfile profile = c.fixed_profile ? *c.fixed_profile : generate_random(n, L, seed);
      const StochasticMatrix m = markov_matrix(profile);
      for (const char* path : paths) {
        const std::string p = path;
        if (p == "dense_svd" && n > c.full_factorization_max_n) continue;
        try {
          const auto start = Clock::now();
          if (p == "ttc") {
            const auto outcome = run_ttc(profile);
            (void)ground_truth_core(outcome);
          } else if (p == "core_id") {
            CoreOptions opts = core_options(c, ScoreMode::right_singular, c.conventions.front(), seed);
            opts.solver = SolverKind::randomized;
            const StochasticMatrix built = markov_matrix(profile);
            (void)identify_core(built, 1, opts);
          } else if (p == "randomized") {
            RandomizedOptions ro{c.oversampling, c.power_iters, derive_seed(seed, 0x51D)};
            (void)randomized_rank1(m, ro);
          } else if (p == "power") {
            (void)right_singular_power(m, c.power);
          } else if (p == "stationary") {
            (void)stationary_power(m, c.power);
          } else {
            (void)dense_svd_leading(m);
          }
          const double ms = elapsed_ms(start);
          if (!warmup) times[p].push_back(ms);
        } catch (const std::exception&) {
          if (!warmup) ++failures[p];
        }
      }
    }
    const double ttc_median = median_of(times["ttc"]);
    for (const char* path : paths) {
      const std::string p = path;
      if (p == "dense_svd" && n > c.full_factorization_max_n) continue;
      TimingRow row;
      row.n = n;
      row.L = L;
      row.path = p;
      row.trials = c.trials;
      row.failures = failures[p];
      const auto& t = times[p];
      row.median_ms = median_of(t);
      row.min_ms = t.empty() ? kNaN : *std::min_element(t.begin(), t.end());
      row.max_ms = t.empty() ? kNaN : *std::max_element(t.begin(), t.end());
      if (!t.empty() && !times["ttc"].empty() && row.median_ms > 0.0) row.speedup_vs_ttc = ttc_median / row.median_ms;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string timing_csv(const TimingReport& report) {
  std::string out = "n,L,path,trials,failures,median_ms,min_ms,max_ms,speedup_vs_ttc,timer_resolution_ns,isa,threads\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.L) + ',' + r.path + ',' + std::to_string(r.trials) + ',' +
           std::to_string(r.failures) + ',' + num(r.median_ms) + ',' + num(r.min_ms) + ',' + num(r.max_ms) + ',' +
           num(r.speedup_vs_ttc) + ',' + num(report.timer_resolution_ns) + ',' + report.isa + ",1\n";
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return kNaN;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace ttcore
