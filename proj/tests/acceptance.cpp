// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "decoygraph/evaluation.hpp"
#include "decoygraph/mitigation.hpp"
#include "decoygraph/zeroday.hpp"
#include "oracles.hpp"

using namespace decoygraph;

namespace {

const std::string kData = DECOYGRAPH_DATA_DIR;

struct Fixture {
  std::string name;
  AttackGraph graph;
  GameParams params;
  oracle::RawGraph raw;
};

Fixture fixture(const std::string& stem) {
  return {stem, load_graph_file(kData + "/" + stem + ".json"),
          load_params_file(kData + "/" + stem + "_params.json"),
          oracle::load_graph(kData + "/" + stem + ".json")};
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome equilibrium_correctness() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 12);
  std::uniform_real_distribution<double> entry(-10.0, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    Matrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    EquilibriumCheck c = verify_equilibrium(m, solve_zero_sum(m), 1e-6);
    worst = std::max({worst, c.defender_gap, c.attacker_gap});
    if (!c.pass) fail(o, "random matrix " + std::to_string(t) + " failed the gap check");
  }
  double worst_2x2 = 0.0;
  std::size_t count = 0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d) {
          Matrix m{{double(a), double(b)}, {double(c), double(d)}};
          GameSolution s = solve_zero_sum(m);
          double err = std::abs(s.value - oracle::value_2x2(a, b, c, d));
          worst_2x2 = std::max(worst_2x2, err);
          ++count;
          if (err > 1e-9) fail(o, "2x2 value mismatch");
        }
  const double secs = elapsed(t0);
  if (secs >= 60.0) fail(o, "runtime " + num(secs) + " s");
  if (o.pass)
    o.detail = "1000 random games, max gap " + num(worst) + "; " + std::to_string(count) +
               " 2x2 games, max value error " + num(worst_2x2) + "; " + num(secs) + " s";
  return o;
}

Outcome oracle_equivalence(const std::vector<Fixture>& fixtures) {
  Outcome o;
  std::size_t cells = 0;
  for (const Fixture& f : fixtures) {
    GameInstance game = build_matrix(f.graph, f.params);
    auto ref_paths = oracle::paths(f.raw);
    if (ref_paths.size() != game.attack_paths.size()) {
      fail(o, f.name + ": path count differs from brute force");
      continue;
    }
    for (std::size_t j = 0; j < ref_paths.size(); ++j)
      if (ref_paths[j] != game.attack_paths[j].nodes) fail(o, f.name + ": path order differs");
    const oracle::Params p{f.params.cap, f.params.esc, f.params.honeypot_cost,
                           f.params.attack_cost_per_hop, f.params.terminate_on_capture};
    for (std::size_t i = 0; i < game.defender_actions.size(); ++i) {
      oracle::EdgeSet hp;
      for (EdgeId e : game.defender_actions[i].edges) {
        const Edge& ed = f.graph.edge(e);
        hp.insert({ed.from, ed.to});
      }
      for (std::size_t j = 0; j < ref_paths.size(); ++j) {
        const double want = oracle::reward(f.raw, p, hp, hp.size(), ref_paths[j]);
        if (game.payoff(i, j) != want) fail(o, f.name + ": cell mismatch");
        ++cells;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(cells) + " cells bit-exact on both fixtures";
  return o;
}

Outcome policy_structure(const Fixture& tree) {
  Outcome o;
  double worst_margin = 1e300;
  for (int esc = 1; esc <= 10; ++esc)
    for (int cap = 1; cap <= 10; ++cap) {
      GameParams p = tree.params;
      p.esc = esc;
      p.cap = cap;
      GameInstance game = build_matrix(tree.graph, p);
      GameSolution sol = solve_zero_sum(game.payoff);
      for (PolicyKind atk : {PolicyKind::greedy, PolicyKind::random}) {
        EvaluationRow r = evaluate_pair(game, sol, PolicyKind::nash, atk);
        worst_margin = std::min(worst_margin, r.defender_reward - sol.value);
        if (r.defender_reward < sol.value - 1e-6)
          fail(o, "NE defender below game value at esc=" + std::to_string(esc) +
                      " cap=" + std::to_string(cap));
      }
    }

  // Fixed strategies: reward as a function of Cap alone must be affine.
  GameInstance base = build_matrix(tree.graph, tree.params);
  GameSolution sol = solve_zero_sum(base.payoff);
  double worst_residual = 0.0;
  for (PolicyKind atk : {PolicyKind::nash, PolicyKind::greedy, PolicyKind::random}) {
    MixedStrategy x = make_policy(PlayerSide::defender, PolicyKind::nash, base, &sol);
    MixedStrategy y = make_policy(PlayerSide::attacker, atk, base, &sol);
    std::vector<double> caps, rewards;
    for (int cap = 1; cap <= 10; ++cap) {
      GameParams p = tree.params;
      p.cap = cap;
      GameInstance game = build_matrix(tree.graph, p);
      caps.push_back(cap);
      rewards.push_back(expected_reward(game, x, y).defender);
    }
    const double n = static_cast<double>(caps.size());
    const double mx = std::accumulate(caps.begin(), caps.end(), 0.0) / n;
    const double my = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < caps.size(); ++k) {
      sxy += (caps[k] - mx) * (rewards[k] - my);
      sxx += (caps[k] - mx) * (caps[k] - mx);
    }
    const double slope = sxy / sxx;
    for (std::size_t k = 0; k < caps.size(); ++k)
      worst_residual =
          std::max(worst_residual, std::abs(rewards[k] - (my + slope * (caps[k] - mx))));
  }
  if (worst_residual >= 1e-9) fail(o, "affine residual " + num(worst_residual));
  if (o.pass)
    o.detail = "min NE margin over greedy/random " + num(worst_margin) +
               "; max affine residual " + num(worst_residual);
  return o;
}

Outcome budget_and_entry_structure(const std::vector<Fixture>& fixtures, const Fixture& net) {
  Outcome o;
  std::string trace;
  for (const Fixture& f : fixtures) {
    double prev = 1e300;
    trace += f.name + " H0..3:";
    for (int h = 0; h <= 3; ++h) {
      GameParams p = f.params;
      p.budget = h;
      GameInstance game = build_matrix(f.graph, p);
      const double attacker = -solve_zero_sum(game.payoff).value;
      trace += " " + num(attacker);
      if (attacker > prev + 1e-9) fail(o, f.name + ": attacker reward rose with H=" + std::to_string(h));
      prev = attacker;
    }
    trace += "; ";
  }
  double prev = -1e300;
  trace += "entries:";
  const std::vector<std::vector<NodeId>> sets{{0}, {0, 1}, {0, 1, 2}};
  for (const auto& s : sets) {
    GameOptions opts;
    opts.paths.enabled_entries = s;
    GameInstance game = build_matrix(net.graph, net.params, opts);
    const double attacker = -solve_zero_sum(game.payoff).value;
    trace += " " + num(attacker);
    if (attacker < prev - 1e-9) fail(o, "attacker reward fell when adding an entry node");
    prev = attacker;
  }
  if (o.pass) o.detail = trace;
  return o;
}

struct Scanned {
  GameInstance game1;
  GameSolution sol1;
  ZeroDayReport report;
};

Scanned scanned(const AttackGraph& g, const GameParams& p) {
  GameInstance game1 = build_matrix(g, p);
  GameSolution sol1 = solve_zero_sum(game1.payoff);
  auto candidates = generate_zero_day_candidates(g);
  ZeroDayReport report = scan_candidates(game1, sol1, candidates);
  rank_candidates(report.rows);
  return {std::move(game1), std::move(sol1), std::move(report)};
}

Outcome zero_day_scan(const std::vector<Fixture>& fixtures) {
  Outcome o;
  std::string trace;
  for (const Fixture& f : fixtures) {
    auto t0 = std::chrono::steady_clock::now();
    Scanned s = scanned(f.graph, f.params);
    const double secs = elapsed(t0);
    const double naive = -s.sol1.value;
    std::size_t positive = 0, zero = 0;
    for (const ZeroDayRow& r : s.report.rows) {
      if (r.pessimistic < naive - 1e-9) fail(o, f.name + ": pessimistic below naive on " + to_string(r.edge));
      if (r.naive != s.report.rows.front().naive) fail(o, f.name + ": naive column not constant");
      if (r.impact > 1e-9) ++positive;
      if (std::abs(r.impact) <= 1e-9) ++zero;
    }
    if (positive == 0) fail(o, f.name + ": no candidate with positive impact");
    if (zero == 0) fail(o, f.name + ": no candidate with zero impact");
    if (secs >= 600.0) fail(o, f.name + ": scan took " + num(secs) + " s");
    trace += f.name + " " + std::to_string(s.report.rows.size()) + " rows (" +
             std::to_string(positive) + " positive, " + std::to_string(zero) + " zero, " +
             num(secs) + " s); ";
  }
  if (o.pass) o.detail = trace;
  return o;
}

Outcome dominance_instances() {
  Outcome o;
  // Dominant: the line graph with shortcut (1,3) against the game-1 equilibrium.
  {
    AttackGraph g = load_graph_file(kData + "/line3.json");
    GameParams p = load_params_file(kData + "/line3_params.json");
    GameInstance game1 = build_matrix(g, p);
    GameSolution sol1 = solve_zero_sum(game1.payoff);
    const Edge e{1, 3};
    if (check_dominance(game1, sol1.defender_strategy, sol1.attacker_strategy, e) != DominanceClass::dominant)
      fail(o, "dominant instance misclassified");
    AugmentedGame ag = augmented_game(game1, sol1.defender_strategy, e);
    BestResponse br = best_response(ag.game.payoff, ag.padded_base, Responder::column);
    if (!ag.game.attack_paths[br.index].uses(ag.zero_day)) fail(o, "dominant: best response avoids a_e");
  }
  // Dominated: a dead-end branch 2→4 whose shortcut (4,3) costs the attacker an extra hop.
  {
    AttackGraph g = load_graph(R"({"nodes":[{"id":1,"value":0,"role":"entry"},
      {"id":2,"value":1,"role":"intermediate"},{"id":3,"value":2,"role":"target"},
      {"id":4,"value":0,"role":"intermediate"}],"edges":[[1,2],[2,3],[2,4]]})");
    GameParams p = load_params_file(kData + "/line3_params.json");
    GameInstance game1 = build_matrix(g, p);
    GameSolution sol1 = solve_zero_sum(game1.payoff);
    MixedStrategy x(game1.defender_actions.size(), 0.0);
    x[1] = 1.0;  // pure {(1,2)}
    const Edge e{4, 3};
    if (check_dominance(game1, x, sol1.attacker_strategy, e) != DominanceClass::dominated)
      fail(o, "dominated instance misclassified");
    AugmentedGame ag = augmented_game(game1, x, e);
    BestResponse br = best_response(ag.game.payoff, ag.padded_base, Responder::column);
    if (ag.game.attack_paths[br.index].uses(ag.zero_day)) fail(o, "dominated: best response uses a_e");
  }
  if (o.pass) o.detail = "dominant -> y[a_e]=1, dominated -> y[a_e]=0";
  return o;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Outcome mitigation_trends(const std::vector<Fixture>& fixtures) {
  Outcome o;
  std::string trace;
  for (const Fixture& f : fixtures) {
    Scanned s = scanned(f.graph, f.params);
    std::vector<MitigationPlan> plans{no_mitigation(), alpha_mitigation(s.report, 1)};
    for (std::uint64_t seed = 0; seed < 100; ++seed) plans.push_back(random_mitigation(s.report, seed));
    auto metrics = evaluate_mitigations(plans, s.game1, s.sol1, s.report, Criterion::pessimistic);

    const double none = metrics[0].capture_after;
    const double alpha = metrics[1].capture_after;
    std::vector<double> random_capture;
    for (std::size_t k = 2; k < metrics.size(); ++k) random_capture.push_back(metrics[k].capture_after);
    const double random = mean(random_capture);
    if (alpha < random - 1e-12) fail(o, f.name + ": alpha capture below random");
    if (!(std::abs(random - none) < alpha - none))
      fail(o, f.name + ": random-vs-none gap " + num(std::abs(random - none)) +
                  " not below alpha-vs-none gap " + num(alpha - none));

    LpMitigationInput in = lp_input_from_report(s.report);
    MitigationPlan lp = lp_mitigation(in);
    const double j_lp = *lp.objective;
    const double j_none = weighted_residual(in, std::vector<double>(in.candidates.size(), 0.0));
    std::vector<double> j_random;
    for (std::size_t k = 2; k < plans.size(); ++k) {
      std::vector<double> x(in.candidates.size(), 0.0);
      for (std::size_t c = 0; c < in.candidates.size(); ++c)
        if (in.candidates[c] == plans[k].pinned.front()) x[c] = 1.0;
      j_random.push_back(weighted_residual(in, x));
    }
    const double j_rand = mean(j_random);
    if (j_lp > j_rand + 1e-9 || j_lp > j_none + 1e-9) fail(o, f.name + ": LP residual not minimal");
    trace += f.name + " capture none " + num(none) + " random " + num(random) + " alpha " +
             num(alpha) + ", J lp " + num(j_lp) + " random " + num(j_rand) + " none " +
             num(j_none) + "; ";
  }
  if (o.pass) {
    o.detail = trace;
  } else {
    o.detail += " [" + trace + "]";
  }
  return o;
}

Outcome critical_point(const Fixture& net) {
  Outcome o;
  std::string trace;
  {
    Scanned s = scanned(net.graph, net.params);
    MitigationPlan plan = critical_point_mitigation(s.game1, s.sol1, s.report, {1.0, 3, false});
    if (*plan.objective != s.sol1.value) fail(o, "kappa=1 changed the game value");
  }
  for (int h = 1; h <= 3; ++h) {
    GameParams p = net.params;
    p.budget = h;
    Scanned s = scanned(net.graph, p);
    std::vector<MitigationPlan> plans{
        no_mitigation(), critical_point_mitigation(s.game1, s.sol1, s.report, {1.5, 3, false}),
        critical_point_mitigation(s.game1, s.sol1, s.report, {1.5, 3, true})};
    auto m = evaluate_mitigations(plans, s.game1, s.sol1, s.report, Criterion::pessimistic);
    const double none = m[0].capture_after, crit = m[1].capture_after, pinned = m[2].capture_after;
    if (crit < none - 1e-12) fail(o, "H=" + std::to_string(h) + ": critical point below no mitigation");
    if (pinned < crit - 1e-12) fail(o, "H=" + std::to_string(h) + ": added honeypot below plain critical point");
    trace += "H=" + std::to_string(h) + " none " + num(none) + " critical " + num(crit) + " +pin " +
             num(pinned) + " (nodes " + std::to_string(plans[1].critical_nodes.size()) + "); ";
  }
  if (o.pass) {
    o.detail = "kappa=1 exact; " + trace;
  } else {
    o.detail += " [" + trace + "]";
  }
  return o;
}

Outcome line_golden() {
  Outcome o;
  AttackGraph g = load_graph_file(kData + "/line3.json");
  GameParams p = load_params_file(kData + "/line3_params.json");
  GameInstance game1 = build_matrix(g, p);
  GameSolution sol1 = solve_zero_sum(game1.payoff);
  auto near = [&](double got, double want, const std::string& what) {
    if (std::abs(got - want) > 1e-6) fail(o, what + " = " + num(got) + ", expected " + num(want));
  };
  near(sol1.value, 16.0, "game value");
  const Edge e{1, 3};
  ZeroDayRow pes = evaluate_candidate(game1, sol1, e, {Criterion::pessimistic});
  near(pes.impact, 26.0, "pessimistic impact");
  ZeroDayRow opt = evaluate_candidate(game1, sol1, e, {Criterion::optimistic});
  near(opt.optimistic, -3.0, "optimistic reward");

  AugmentedGame ag = augmented_game(game1, sol1.defender_strategy, e);
  GameSolution sol2 = solve_zero_sum(ag.game.payoff);
  near(sol2.value, 3.0, "game-2 value");
  near(sol2.attacker_strategy[0], 0.5, "y2[0]");
  near(sol2.attacker_strategy[1], 0.5, "y2[1]");
  for (std::size_t i = 0; i < ag.game.defender_actions.size(); ++i) {
    const std::string label = to_string(ag.game.defender_actions[i], ag.game.graph);
    double want = label == "{(2,3)}" ? 17.0 / 30.0 : label == "{(1,3)}" ? 13.0 / 30.0 : 0.0;
    near(sol2.defender_strategy[i], want, "x2" + label);
  }
  near(capture_proportion(ag.game, ag.padded_base, sol2.attacker_strategy), 0.5, "capture");
  if (o.pass) o.detail = "value 16, impact 26, optimistic -3, game-2 value 3, capture 0.5";
  return o;
}

}  // namespace

int main() {
  std::vector<Fixture> fixtures{fixture("tree7"), fixture("net20")};
  const Fixture& tree = fixtures[0];
  const Fixture& net = fixtures[1];

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"equilibrium correctness", equilibrium_correctness},
      {"payoff matrix matches per-cell oracle", [&] { return oracle_equivalence(fixtures); }},
      {"NE robustness and affine Cap dependence", [&] { return policy_structure(tree); }},
      {"monotone in honeypots and entry nodes", [&] { return budget_and_entry_structure(fixtures, net); }},
      {"zero-day scan structure", [&] { return zero_day_scan(fixtures); }},
      {"dominance classification", dominance_instances},
      {"mitigation trends", [&] { return mitigation_trends(fixtures); }},
      {"critical point mitigation", [&] { return critical_point(net); }},
      {"line-graph golden values", line_golden},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
