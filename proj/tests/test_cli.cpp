#include <filesystem>
#include <fstream>
#include <sstream>

#include "decoygraph/cli.hpp"
#include "decoygraph/mitigation.hpp"
#include "decoygraph/zeroday.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

using namespace decoygraph;
using doctest::Approx;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = decoygraph::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> with_files(std::vector<std::string> args, const std::string& stem = "line3") {
  args.insert(args.end(), {"-g", fixtures::kData + "/" + stem + ".json", "-p",
                           fixtures::kData + "/" + stem + "_params.json"});
  return args;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve on the line graph") {
  Result r = cli(with_files({"solve"}));
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["value"].get<double>() == Approx(16.0));
  REQUIRE(doc["defender_strategy"].size() == 1);
  CHECK(doc["defender_strategy"][0]["action"] == "{(2,3)}");

  Result csv = cli(with_files({"solve", "--format", "csv"}));
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("player,index,label,probability\n", 0) == 0);
  CHECK(csv.out.find("value,,,16.000000\n") != std::string::npos);
}

TEST_CASE("zero-day scan ranks the shortcut first") {
  Result r = cli(with_files({"zeroday-scan"}));
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(first.rfind("1,3,", 0) == 0);
  CHECK(first.find(",26.000000,") != std::string::npos);

  Result top = cli(with_files({"zeroday-scan", "--top", "1", "--criterion", "optimistic"}));
  REQUIRE(top.code == 0);
  CHECK(std::count(top.out.begin(), top.out.end(), '\n') == 2);
  CHECK(top.out.find(",13.000000,") != std::string::npos);

  Result j = cli(with_files({"zeroday-scan", "--format", "json", "--pessimistic-y", "game2_ne"}));
  REQUIRE(j.code == 0);
  ZeroDayReport back = report_from_json(j.out);
  CHECK(back.options.pessimistic_attacker == PessimisticAttacker::restricted_equilibrium);
  CHECK(back.rows.front().pessimistic == Approx(274.0 / 30.0).epsilon(1e-6));
}

TEST_CASE("mitigate writes a plan that parses back") {
  for (const char* s : {"alpha", "random", "lp", "nature", "critical", "none"}) {
    Result r = cli(with_files({"mitigate", "--strategy", s}, "tree7"));
    INFO(s);
    REQUIRE(r.code == 0);
    PlanDocument doc = plan_from_json(r.out);
    CHECK(to_string(doc.plan.kind) == s);
  }
  Result a = cli(with_files({"mitigate", "--strategy", "alpha"}));
  PlanDocument doc = plan_from_json(a.out);
  CHECK(doc.plan.pinned == std::vector<Edge>{{1, 3}});
  CHECK(doc.metrics.effectiveness == Approx(1.0));

  Result csv = cli(with_files({"mitigate", "--strategy", "alpha", "--format", "csv"}));
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("edge_u,edge_v,reward_before,reward_after,reference,prevented,", 0) == 0);
}

TEST_CASE("evaluate and sweep") {
  Result e = cli(with_files({"evaluate", "--defender", "random", "--attacker", "greedy"}));
  REQUIRE(e.code == 0);
  CHECK(e.out.find("random,greedy,8.500000,-8.500000,1.000000,16.000000") != std::string::npos);

  Result s = cli(with_files({"sweep", "--param", "honeypots", "--values", "0,1"}));
  REQUIRE(s.code == 0);
  CHECK(s.out ==
        "param,value,def_policy,atk_policy,def_reward,atk_reward,capture\n"
        "honeypots,0,nash,nash,-13.000000,13.000000,0.000000\n"
        "honeypots,1,nash,nash,16.000000,-16.000000,1.000000\n");

  Result ent = cli(with_files({"sweep", "--param", "entry_nodes", "--values", "0,0;1,0;1;2"}, "net20"));
  REQUIRE(ent.code == 0);
  CHECK(ent.out.find("\nentry_nodes,0;1;2,") != std::string::npos);

  CHECK(cli(with_files({"sweep", "--param", "esc", "--values", "1,x"})).code == 1);
  CHECK(cli(with_files({"sweep", "--param", "esc", "--values", "3,1,2"})).code == 1);
}

TEST_CASE("paths listing") {
  Result r = cli(with_files({"paths"}, "tree7"));
  REQUIRE(r.code == 0);
  CHECK(r.out == "index,entry,target,hops,nodes\n0,1,5,3,1;2;4;5\n1,1,7,3,1;3;6;7\n");
  Result capped = cli(with_files({"paths", "--max-hops", "2"}, "tree7"));
  CHECK(capped.code == 0);
  CHECK(capped.out == "index,entry,target,hops,nodes\n");
}

TEST_CASE("errors and exit codes") {
  Result missing = cli({"solve", "-g", "/nonexistent/graph.json", "-p", fixtures::kData + "/line3_params.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("/nonexistent/graph.json") != std::string::npos);

  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli(with_files({"solve", "--format", "xml"})).code == 1);
  CHECK(cli(with_files({"mitigate", "--strategy", "alpha", "-k", "9"})).code == 1);
  CHECK(cli(with_files({"mitigate", "--strategy", "critical", "--kappa", "0.5"})).code == 1);
  CHECK(cli(with_files({"evaluate", "--defender", "clever"})).code == 1);

  Result help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("zeroday-scan") != std::string::npos);
  CHECK(cli({"mitigate", "--help"}).code == 0);
}

TEST_CASE("output is deterministic and -o writes a file") {
  for (auto args : {std::vector<std::string>{"zeroday-scan"}, {"mitigate", "--strategy", "random", "--seed", "7"},
                    {"mitigate", "--strategy", "lp", "--budget-m", "1.5"}, {"solve"}}) {
    Result a = cli(with_files(args, "net20"));
    Result b = cli(with_files(args, "net20"));
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }

  auto dir = std::filesystem::temp_directory_path() / "decoygraph_cli_test";
  std::filesystem::create_directories(dir);
  auto file = dir / "scan.json";
  Result w = cli(with_files({"zeroday-scan", "--format", "json", "-o", file.string()}));
  REQUIRE(w.code == 0);
  CHECK(w.out.empty());
  CHECK(report_from_json(slurp(file)).rows.size() == 2);
  CHECK(cli(with_files({"solve", "-o", (dir / "missing" / "x.json").string()})).code == 1);
  std::filesystem::remove_all(dir);
}
