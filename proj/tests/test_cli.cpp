#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ttcore/cli.hpp"
#include "ttcore/profile.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ttcore::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "ttcore_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kExample = R"({"n":3,"prefs":[[2,1,3],[1,2,3],[1,3,2]]})";

}  // namespace

TEST_CASE("core on the worked example") {
  const auto path = write_file("example.json", kExample);
  auto r = run({"--k", "1", "core", "--profile", path});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["members"] == nlohmann::json::array({3}));

  r = run({"--k", "1", "--format", "csv", "core", "--profile", path, "--solver", "randomized"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# members 3") != std::string::npos);

  // After removing agent 3 the remaining pair is symmetric, so round two has no signal.
  r = run({"--k", "2", "core", "--profile", path, "--iterative"});
  CHECK(r.code == 2);
  CHECK(r.err.find("degenerate") != std::string::npos);

  const auto big = write_file("big.json", ttcore::to_json_string(ttcore::generate_random(15, 15, 2)));
  r = run({"--k", "3", "core", "--profile", big, "--iterative"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["members"].size() == 3);
}

TEST_CASE("ttc and matrix subcommands") {
  const auto path = write_file("example.json", kExample);
  auto r = run({"ttc", "--profile", path});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["allocation"] == nlohmann::json::array({2, 1, 3}));
  CHECK(j["removal_round"] == nlohmann::json::array({1, 1, 2}));

  r = run({"matrix", "--profile", path});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}

TEST_CASE("gen round trips through the profile parser") {
  auto r = run({"--seed", "7", "gen", "--n", "6", "--L", "3"});
  REQUIRE(r.code == 0);
  const auto p = ttcore::parse_json(r.out);
  CHECK(p.size() == 6);
  CHECK(p.max_list_length() == 3);
  CHECK(p == ttcore::generate_random(6, 3, 7));

  r = run({"--format", "csv", "--seed", "7", "gen", "--n", "6"});
  REQUIRE(r.code == 0);
  CHECK(ttcore::parse_csv(r.out) == ttcore::generate_random(6, 6, 7));
}

TEST_CASE("usage errors exit 1") {
  auto r = run({"core", "--bogus"});
  CHECK(r.code == 1);
  CHECK(r.err.find("Usage") != std::string::npos);

  r = run({});
  CHECK(r.code == 1);

  r = run({"core", "--profile", (scratch() / "missing.json").string()});
  CHECK(r.code == 1);

  const auto bad = write_file("bad.json", R"({"n":2,"prefs":[[1,1],[2,1]]})");
  r = run({"core", "--profile", bad});
  CHECK(r.code == 1);
  CHECK(r.err.find("duplicate object 1") != std::string::npos);

  r = run({"--help"});
  CHECK(r.code == 0);
}

TEST_CASE("degenerate scores exit 2") {
  const auto path = write_file("symmetric.json", R"({"n":2,"prefs":[[1,2],[2,1]]})");
  const auto r = run({"core", "--profile", path});
  CHECK(r.code == 2);
  CHECK(r.err.find("degenerate") != std::string::npos);
}

TEST_CASE("bench reruns are byte-identical without timing") {
  const auto a = (scratch() / "a.csv").string();
  const auto b = (scratch() / "b.csv").string();
  const auto agg = (scratch() / "agg.csv").string();
  const std::vector<std::string> common{"--seed", "11", "--mode", "stationary,singular", "--convention",
                                        "example,theorem", "bench", "--n", "10,20", "--trials", "5",
                                        "--no-timing", "--aggregate", agg, };
  auto args = common;
  args.insert(args.end(), {"--out", a});
  // --out is a global flag; fallthrough lets it follow the subcommand.
  REQUIRE(run(args).code == 0);
  args = common;
  args.insert(args.end(), {"--out", b});
  REQUIRE(run(args).code == 0);
  const auto first = slurp(a);
  CHECK(first == slurp(b));
  CHECK(first.rfind("n,L,trial,seed,mode,convention,noise", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 1 + 2 * 5 * 2 * 2);
  CHECK_FALSE(slurp(agg).empty());
}

TEST_CASE("noise and timing subcommands") {
  auto r = run({"noise", "--n", "12", "--trials", "3", "--noise", "0,0.1", "--no-timing"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 3 * 2);

  r = run({"timing", "--n", "20", "--trials", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("dense_svd") != std::string::npos);
}
