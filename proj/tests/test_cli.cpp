#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace balchain;
using nlohmann::json;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "balchain");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("balchain_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("seq", "[cli]") {
  CHECK(run({"seq", "balancing", "--count", "5"}).out == "0\n1\n6\n35\n204\n");
  CHECK(run({"seq", "pell", "--count", "4", "--format", "json"}).out == "[\"0\",\"1\",\"2\",\"5\"]\n");
  CHECK(run({"seq", "balancing-like", "--a", "3", "--count", "5"}).out == "0\n1\n3\n8\n21\n");
  CHECK(run({"seq", "lucas-cobalancing", "--count", "3"}).out == "1\n7\n41\n");
  CHECK(run({"seq", "balancing-like", "--count", "5"}).status == cli::kExitParameter);
  CHECK(run({"seq", "tribonacci"}).status == cli::kExitParameter);
}

TEST_CASE("chain", "[cli]") {
  CHECK(run({"chain", "balancing", "--n", "3"}).out == "5/6,1/6,0\n5/6,0,1/6\n5/6,1/6,0\n");
  const auto lucas = run({"chain", "lucas", "--n", "3", "--format", "json"});
  REQUIRE(lucas.status == 0);
  CHECK(json::parse(lucas.out)["rows"][2] == json::array({"1/3", "1/6", "1/2"}));

  const auto bad = run({"chain", "balancing", "--n", "2"});
  CHECK(bad.status == cli::kExitParameter);
  CHECK(bad.out.empty());
  const auto err = json::parse(bad.err);
  CHECK(err["error"]["code"] == 2);
  CHECK(err["error"]["type"] == "parameter_error");

  CHECK(run({"chain", "balancing-q", "--n", "5", "--q", "1/5"}).status == cli::kExitParameter);
  CHECK(run({"chain", "balancing-q", "--n", "5", "--q", "one"}).status == cli::kExitParameter);
  CHECK(run({"chain", "balancing", "--n", "5", "--format", "xml"}).status == cli::kExitParameter);
}

TEST_CASE("solve", "[cli]") {
  CHECK(run({"solve", "balancing", "--n", "3", "--method", "exact", "--format", "json"}).out ==
        "{\"pi\":[\"5/6\",\"1/7\",\"1/42\"]}\n");
  CHECK(run({"solve", "balancing", "--n", "3"}).out == "5/6\n1/7\n1/42\n");

  const auto power = run({"solve", "balancing", "--n", "3", "--method", "power", "--tol", "1e-12", "--format", "json"});
  REQUIRE(power.status == 0);
  const auto pi = json::parse(power.out)["pi"].get<std::vector<double>>();
  CHECK(linf_distance(pi, ExactDistribution{Rational(5, 6), Rational(1, 7), Rational(1, 42)}) < 1e-10);

  const std::vector<std::string> sim = {"solve", "balancing", "--n", "4", "--method", "simulate",
                                        "--steps", "200000", "--seed", "42", "--format", "json"};
  const auto first = run(sim);
  REQUIRE(first.status == 0);
  CHECK(first.out == run(sim).out);
  const auto doc = json::parse(first.out);
  CHECK(doc["generator"] == "mt19937_64");
  CHECK(doc["seed"] == 42);

  const auto stuck = run({"solve", "lucas-q", "--n", "10", "--q", "1/100", "--method", "power", "--max-iter", "2"});
  CHECK(stuck.status == cli::kExitNonConvergence);
  CHECK(json::parse(stuck.err)["error"]["last_iterate"].size() == 10);

  CHECK(run({"solve", "--method", "exact"}).status == cli::kExitParameter);
  CHECK(run({"solve", "balancing", "--n", "4", "--method", "simulate", "--start", "9"}).status == cli::kExitParameter);
}

TEST_CASE("matrix-file round trip", "[cli]") {
  const auto path = temp_file("matrix.json");
  REQUIRE(run({"chain", "lucas-cobalancing", "--n", "6", "--format", "json", "--out", path.string()}).status == 0);
  const auto via_file = run({"solve", "--matrix-file", path.string()});
  const auto via_family = run({"solve", "lucas-cobalancing", "--n", "6"});
  CHECK(via_file.status == 0);
  CHECK(via_file.out == via_family.out);

  const auto csv_path = temp_file("matrix.csv");
  REQUIRE(run({"chain", "pell-ratio", "--n", "5", "--out", csv_path.string()}).status == 0);
  CHECK(run({"solve", "--matrix-file", csv_path.string()}).out == run({"solve", "pell-ratio", "--n", "5"}).out);

  std::ofstream(temp_file("periodic.csv")) << "0,1\n1,0\n";
  const auto periodic = run({"solve", "--matrix-file", temp_file("periodic.csv").string()});
  CHECK(periodic.status == cli::kExitParameter);
  CHECK(json::parse(periodic.err)["error"]["type"] == "solver_error");

  CHECK(run({"solve", "--matrix-file", temp_file("missing.json").string()}).status == cli::kExitParameter);
  std::filesystem::remove(path);
  std::filesystem::remove(csv_path);
  std::filesystem::remove(temp_file("periodic.csv"));
}

TEST_CASE("--out writes results only", "[cli]") {
  const auto path = temp_file("seq.txt");
  const auto outcome = run({"seq", "cobalancing", "--count", "4", "--out", path.string()});
  CHECK(outcome.status == 0);
  CHECK(outcome.out.empty());
  CHECK(slurp(path) == "0\n0\n2\n14\n");
  std::filesystem::remove(path);
}

TEST_CASE("verify", "[cli]") {
  const auto single = run({"verify", "lucas-cobalancing", "--n", "4"});
  CHECK(single.status == 0);
  CHECK(single.out == "family,n,params,exact_match,max_gap\nlucas-cobalancing,4,,true,0\n");

  const auto all = run({"verify", "--all", "--max-n", "12"});
  CHECK(all.status == 0);
  CHECK(all.out.find("false") == std::string::npos);

  const auto beta = run({"verify", "--beta-powers", "--max-n", "100"});
  CHECK(beta.status == 0);
  CHECK(beta.out.find("100,true") != std::string::npos);

  const auto report = run({"verify", "lucas", "--n", "5", "--format", "json"});
  const auto doc = json::parse(report.out);
  CHECK(doc[0]["exact_match"] == true);
  CHECK(doc[0]["notes"].get<std::string>().find("printed") != std::string::npos);

  CHECK(run({"verify"}).status == cli::kExitParameter);
  CHECK(run({"verify", "lucas-cobalancing", "--n", "3"}).status == cli::kExitParameter);
}

TEST_CASE("limit", "[cli]") {
  const auto sizes = run({"limit", "--sizes", "5,10,20", "--format", "json"});
  REQUIRE(sizes.status == 0);
  const auto rows = json::parse(sizes.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["gap"].get<double>() > rows[1]["gap"].get<double>());
  CHECK(rows[1]["gap"].get<double>() > rows[2]["gap"].get<double>());

  const auto ratio = run({"limit", "--ratio", "--max-n", "10"});
  REQUIRE(ratio.status == 0);
  std::istringstream lines(ratio.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,gap");
  double previous = 1;
  int count = 0;
  while (std::getline(lines, line)) {
    const double gap = std::stod(line.substr(line.find(',') + 1));
    CHECK(gap < previous);
    previous = gap;
    ++count;
  }
  CHECK(count == 9);

  const auto three = run({"limit", "--sizes", "3", "--format", "json"});
  CHECK(json::parse(three.out)[0]["gap"].get<double>() < 0.1);
  CHECK(run({"limit"}).status == cli::kExitParameter);
  CHECK(run({"limit", "--sizes", "2"}).status == cli::kExitParameter);
}

TEST_CASE("help and unknown subcommands", "[cli]") {
  CHECK(run({"--help"}).status == 0);
  CHECK(run({}).status == cli::kExitParameter);
  CHECK(run({"plot"}).status == cli::kExitParameter);
}
