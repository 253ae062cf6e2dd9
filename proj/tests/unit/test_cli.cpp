#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slicewalk/cli.hpp"
#include "slicewalk/graph_gen.hpp"

using namespace slicewalk;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int code = cli_dispatch(args, o, e);
  return {code, o.str(), e.str()};
}

std::string temp_path(const std::string& name) { return std::string(P_tmpdir) + "/slicewalk_test_" + name; }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"sample", "--bogus"}).code == 2);
  CHECK(run({"sample", "--n", "6", "--degree", "3"}).code == 2);  // no slice family
  CHECK(run({"--format", "xml", "sample"}).code == 2);
  const auto r = run({"sample", "--two-sided"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--in") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("gen-graph writes a loadable graph with a stanza") {
  const std::string path = temp_path("g.txt");
  REQUIRE(run({"--seed", "7", "gen-graph", "--bipartite", "--n", "100", "--delta", "3", "--out", path}).code == 0);
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "# tool=slicewalk-lab");
  const AnyGraph g = load_graph(path);
  REQUIRE(std::holds_alternative<BipartiteRegularGraph>(g));
  CHECK(std::get<BipartiteRegularGraph>(g) == gen_bipartite_regular(100, 3, 7));
  std::remove(path.c_str());
}

TEST_CASE("verify-spectral exit code follows the verdict") {
  const std::string path = temp_path("v.txt");
  REQUIRE(run({"--seed", "3", "gen-graph", "--n", "10", "--delta", "3", "--out", path}).code == 0);
  const auto ok = run({"verify-spectral", "--two-sided", "--kx", "2", "--ky", "2", "--in", path});
  CHECK(ok.code == 0);
  const auto doc = nlohmann::json::parse(ok.out);
  CHECK(doc["reproducibility"]["command"] == "verify-spectral");
  CHECK(doc["verification"]["all_pass"] == true);
  // the regular-slice bound fails on C6-like links; exit 1 reports it
  std::ofstream c6(path);
  c6 << "regular 6 2\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";
  c6.close();
  CHECK(run({"verify-spectral", "--regular", "--k", "2", "--in", path}).code == 1);
  std::remove(path.c_str());
}

TEST_CASE("reports are byte-identical for the same seed") {
  const std::vector<std::string> a{"--seed", "4", "sample", "--one-sided", "--k", "2", "--lambda", "0.5",
                                   "--n", "6", "--degree", "3", "--steps", "20000"};
  const auto r1 = run(a), r2 = run(a);
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  auto b = a;
  b[1] = "5";
  CHECK(run(b).out != r1.out);
}

TEST_CASE("config files supply defaults, flags win") {
  const std::string cfg = temp_path("c.conf");
  std::ofstream f(cfg);
  f << "# experiment defaults\nn-side = 300\ndelta=3\nsamples=3\nseed=9\n";
  f.close();
  const auto r = run({"--config", cfg, "experiment", "ramanujan", "--samples", "2"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["experiment"]["config"]["n_side"] == 300);
  CHECK(doc["experiment"]["config"]["samples"] == 2);
  CHECK(doc["reproducibility"]["seed"] == 9);
  std::ofstream bad(cfg);
  bad << "n-side 300\n";
  bad.close();
  CHECK(run({"--config", cfg, "experiment", "ramanujan"}).code == 2);
  std::remove(cfg.c_str());
}

TEST_CASE("csv output has the stanza and one row per record") {
  const auto r = run({"--format", "csv", "verify-spectral", "--two-sided", "--kx", "1", "--ky", "1", "--n", "3",
                      "--degree", "2"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  int comments = 0, rows = 0;
  while (std::getline(in, line)) (line.rfind("# ", 0) == 0 ? comments : rows)++;
  CHECK(comments > 5);
  CHECK(rows == 2);  // header + the single face of C6
}

TEST_CASE("timing is opt-in") {
  const std::vector<std::string> a{"experiment", "common-neighbors", "--n-side", "50", "--delta", "3", "--samples", "2"};
  CHECK(run(a).out.find("wall_time") == std::string::npos);
  auto b = a;
  b.insert(b.begin(), "--timing");
  CHECK(run(b).out.find("wall_time_seconds") != std::string::npos);
}
