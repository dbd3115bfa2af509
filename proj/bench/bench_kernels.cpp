// Serial reference vs OpenMP kernels on the 20-node fixture.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "decoygraph/game_core.hpp"
#include "decoygraph/lp_solver.hpp"
#include "decoygraph/mitigation.hpp"
#include "decoygraph/parallel.hpp"
#include "decoygraph/zeroday.hpp"

using namespace decoygraph;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  configure_threads_from_env();
  const std::string dir = DECOYGRAPH_DATA_DIR;
  AttackGraph g = load_graph_file(dir + "/net20.json");
  GameParams p = load_params_file(dir + "/net20_params.json");
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    GameParams p3 = p;
    p3.budget = 3;
    GameInstance game = build_matrix(g, p3, {}, Execution::serial);
    Matrix a, b;
    double ts = seconds([&] { a = payoff_matrix(g, p3, game.defender_actions, game.attack_paths, {}, Execution::serial); }, 5);
    double tp = seconds([&] { b = payoff_matrix(g, p3, game.defender_actions, game.attack_paths, {}, Execution::parallel); }, 5);
    report("payoff_matrix H=3", ts, tp, a == b);
  }

  GameInstance game1 = build_matrix(g, p);
  GameSolution sol1 = solve_zero_sum(game1.payoff);
  std::vector<ZeroDayCandidate> candidates = generate_zero_day_candidates(g);

  ZeroDayReport rs, rp;
  double ts = seconds([&] { rs = scan_candidates(game1, sol1, candidates, {}, Execution::serial); }, 1);
  double tp = seconds([&] { rp = scan_candidates(game1, sol1, candidates, {}, Execution::parallel); }, 1);
  bool same = rs.rows.size() == rp.rows.size();
  for (std::size_t k = 0; same && k < rs.rows.size(); ++k)
    same = rs.rows[k].pessimistic == rp.rows[k].pessimistic && rs.rows[k].optimistic == rp.rows[k].optimistic;
  report("zero-day scan", ts, tp, same);

  rank_candidates(rs.rows);
  std::vector<MitigationPlan> plans{no_mitigation(), alpha_mitigation(rs, 1)};
  for (std::uint64_t seed = 0; seed < 10; ++seed) plans.push_back(random_mitigation(rs, seed));
  std::vector<MitigationMetrics> ms, mp;
  ts = seconds([&] { ms = evaluate_mitigations(plans, game1, sol1, rs, Criterion::pessimistic, Execution::serial); }, 1);
  tp = seconds([&] { mp = evaluate_mitigations(plans, game1, sol1, rs, Criterion::pessimistic, Execution::parallel); }, 1);
  same = true;
  for (std::size_t k = 0; k < ms.size(); ++k)
    same = same && ms[k].capture_after == mp[k].capture_after && ms[k].effectiveness == mp[k].effectiveness;
  report("mitigation evaluation", ts, tp, same);
  return same ? 0 : 1;
}
