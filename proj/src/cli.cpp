#include "ttcore/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ttcore/core_id.hpp"
#include "ttcore/experiment.hpp"
#include "ttcore/markov.hpp"
#include "ttcore/profile.hpp"
#include "ttcore/spectral.hpp"
#include "ttcore/ttc.hpp"

namespace ttcore {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PreferenceProfile load(const std::string& path) { return read_profile(path, format_from_path(path)); }

std::vector<ScoreMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<ScoreMode> out;
  for (const auto& s : names) {
    if (s == "stationary") out.push_back(ScoreMode::stationary);
    else if (s == "singular") out.push_back(ScoreMode::right_singular);
    else throw UsageError("unknown mode '" + s + "' (stationary|singular)");
  }
  return out;
}

std::vector<Convention> parse_conventions(const std::vector<std::string>& names) {
  std::vector<Convention> out;
  for (const auto& s : names) {
    if (s == "example") out.push_back(Convention::example);
    else if (s == "theorem") out.push_back(Convention::theorem);
    else throw UsageError("unknown convention '" + s + "' (example|theorem)");
  }
  return out;
}

SolverKind parse_solver(const std::string& s) {
  if (s == "power") return SolverKind::power;
  if (s == "randomized") return SolverKind::randomized;
  if (s == "dense_svd") return SolverKind::dense_svd;
  throw UsageError("unknown solver '" + s + "' (power|randomized|dense_svd)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Top Trading Cycles reference engine and spectral core identification"};
  app.name("ttcore");
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::vector<std::string> modes{"singular"};
  std::vector<std::string> conventions{"example"};
  std::size_t k = 0;
  std::string format = "json";
  std::string out_path;
  app.add_option("--seed", seed, "PRNG seed");
  app.add_option("--mode", modes, "stationary|singular (comma list for bench/noise)")->delimiter(',');
  app.add_option("--convention", conventions, "example|theorem (comma list for bench/noise)")->delimiter(',');
  app.add_option("--k", k, "core size (default: ground-truth size, or 1 without truth)");
  app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "output path (default stdout)");

  std::size_t n = 0;
  std::size_t L = 0;
  auto* gen = app.add_subcommand("gen", "emit a random profile");
  gen->add_option("--n", n, "agents")->required();
  gen->add_option("--L", L, "truncation length (default n)");

  std::string profile_path;
  auto* ttc = app.add_subcommand("ttc", "run reference TTC on a profile");
  ttc->add_option("--profile", profile_path)->required();

  auto* matrix = app.add_subcommand("matrix", "emit the row-stochastic preference matrix as dense CSV");
  matrix->add_option("--profile", profile_path)->required();

  std::string solver = "power";
  bool iterative = false;
  auto* core = app.add_subcommand("core", "spectral core identification on a profile");
  core->add_option("--profile", profile_path)->required();
  core->add_option("--solver", solver, "power|randomized|dense_svd");
  core->add_flag("--iterative", iterative, "remove the top agent and re-solve k times");

  std::vector<std::size_t> n_values;
  std::size_t trials = 100;
  std::string config_path;
  std::string aggregate_path;
  bool no_timing = false;
  std::vector<double> noise_levels;
  std::string noise_model = "score";
  auto add_harness_options = [&](CLI::App* sub) {
    sub->add_option("--n", n_values, "agent counts, comma separated")->delimiter(',');
    sub->add_option("--L", L, "truncation length (default n)");
    sub->add_option("--trials", trials, "instances per n");
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--profile", profile_path, "use this profile for every trial");
    sub->add_option("--solver", solver, "power|randomized|dense_svd");
  };
  auto* bench = app.add_subcommand("bench", "core-identification accuracy harness");
  add_harness_options(bench);
  bench->add_option("--aggregate", aggregate_path, "aggregate table path (default stdout)");
  bench->add_flag("--no-timing", no_timing, "leave timing columns empty for byte-reproducible output");
  auto* noise = app.add_subcommand("noise", "noise robustness sweep");
  add_harness_options(noise);
  noise->add_option("--aggregate", aggregate_path, "aggregate table path (default stdout)");
  noise->add_flag("--no-timing", no_timing, "leave timing columns empty");
  noise->add_option("--noise", noise_levels, "noise levels, comma separated")->delimiter(',');
  noise->add_option("--noise-model", noise_model, "score|rank")->check(CLI::IsMember({"score", "rank"}));
  auto* timing = app.add_subcommand("timing", "wall-clock comparison of solvers and reference TTC");
  add_harness_options(timing);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    const auto mode_list = parse_modes(modes);
    const auto convention_list = parse_conventions(conventions);
    const ProfileFormat fmt = format == "csv" ? ProfileFormat::csv : ProfileFormat::json;

    if (gen->parsed()) {
      const auto p = generate_random(n, L == 0 ? n : L, seed);
      emit(fmt == ProfileFormat::json ? to_json_string(p) : to_csv_string(p), out_path, out);
      return 0;
    }
    if (ttc->parsed()) {
      const auto outcome = run_ttc(load(profile_path));
      if (fmt == ProfileFormat::json) {
        emit(to_json_string(outcome), out_path, out);
      } else {
        std::string text = "agent,object,round\n";
        for (std::size_t a = 0; a < outcome.size(); ++a) {
          text += std::to_string(a + 1) + ',' + std::to_string(outcome.allocation.assignment[a]) + ',' +
                  std::to_string(outcome.removal_round[a]) + '\n';
        }
        emit(text, out_path, out);
      }
      return 0;
    }
    if (matrix->parsed()) {
      std::ostringstream ss;
      write_dense_csv(ss, markov_matrix(load(profile_path)).matrix());
      emit(ss.str(), out_path, out);
      return 0;
    }
    if (core->parsed()) {
      const auto profile = load(profile_path);
      CoreOptions opts;
      opts.mode = mode_list.front();
      opts.convention = convention_list.front();
      opts.solver = parse_solver(solver);
      opts.randomized.seed = seed;
      const std::size_t kk = k == 0 ? 1 : k;
      const auto m = markov_matrix(profile);
      const CoreEstimate est = iterative ? identify_core_iterative(m, kk, opts) : identify_core(m, kk, opts);
      if (fmt == ProfileFormat::json) {
        emit(to_json_string(est), out_path, out);
      } else {
        std::string text = "agent,score\n";
        for (std::size_t a = 0; a < est.scores.size(); ++a) {
          char buf[32];
          auto res = std::to_chars(buf, buf + sizeof buf, est.scores[a]);
          text += std::to_string(a + 1) + ',' + std::string(buf, res.ptr) + '\n';
        }
        text += "# members";
        for (AgentId a : est.members) text += ' ' + std::to_string(a);
        emit(text + '\n', out_path, out);
      }
      return 0;
    }

    ExperimentConfig config;
    if (!config_path.empty()) config = config_from_json(slurp(config_path));
    CLI::App* sub = bench->parsed() ? bench : (noise->parsed() ? noise : timing);
    if (sub->count("--n")) config.n_values = n_values;
    if (sub->count("--L")) config.L = L;
    if (sub->count("--trials")) config.trials = trials;
    if (app.count("--seed")) config.seed = seed;
    if (app.count("--mode")) config.modes = mode_list;
    if (app.count("--convention")) config.conventions = convention_list;
    if (sub->count("--solver")) config.solver = parse_solver(solver);
    if (app.count("--k")) {
      config.k_policy.kind = KPolicy::Kind::fixed;
      config.k_policy.k = k;
    }
    if (!profile_path.empty()) {
      config.fixed_profile = load(profile_path);
      if (config.n_values.empty()) config.n_values = {config.fixed_profile->size()};
    }
    if (no_timing) config.timing = false;
    if (noise->parsed()) {
      if (sub->count("--noise")) config.noise_levels = noise_levels;
      if (sub->count("--noise-model")) config.noise_model = noise_model == "rank" ? NoiseModel::rank : NoiseModel::score;
    }

    if (timing->parsed()) {
      emit(timing_csv(run_timing(config)), out_path, out);
      return 0;
    }
    const ExperimentReport report = bench->parsed() ? run_accuracy(config) : run_noise_sweep(config);
    emit(records_csv(report.records), out_path, out);
    const std::string table = aggregates_csv(report.aggregates);
    if (!aggregate_path.empty()) {
      emit(table, aggregate_path, out);
    } else if (!out_path.empty()) {
      out << table;
    }
    return 0;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const CoreIdError& e) {
    err << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const MarkovError& e) {
    err << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ttcore
