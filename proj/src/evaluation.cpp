#include "decoygraph/evaluation.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "decoygraph/errors.hpp"
#include "decoygraph/format.hpp"

namespace decoygraph {

std::string_view to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::nash:
      return "nash";
    case PolicyKind::greedy:
      return "greedy";
    case PolicyKind::random:
      return "random";
  }
  return "nash";
}

PolicyKind parse_policy_kind(std::string_view s) {
  if (s == "nash") return PolicyKind::nash;
  if (s == "greedy") return PolicyKind::greedy;
  if (s == "random") return PolicyKind::random;
  throw ValidationError("unknown policy \"" + std::string(s) + "\"");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::esc:
      return "esc";
    case SweepParameter::cap:
      return "cap";
    case SweepParameter::honeypots:
      return "honeypots";
    case SweepParameter::entry_nodes:
      return "entry_nodes";
  }
  return "esc";
}

SweepParameter parse_sweep_parameter(std::string_view s) {
  if (s == "esc") return SweepParameter::esc;
  if (s == "cap") return SweepParameter::cap;
  if (s == "honeypots") return SweepParameter::honeypots;
  if (s == "entry_nodes") return SweepParameter::entry_nodes;
  throw ValidationError("unknown sweep parameter \"" + std::string(s) + "\"");
}

namespace {

std::size_t greedy_path(const GameInstance& game) {
  const AttackGraph& g = game.graph;
  std::size_t best = 0;
  double best_sum = -1.0;
  for (std::size_t j = 0; j < game.attack_paths.size(); ++j) {
    const AttackPath& p = game.attack_paths[j];
    double sum = 0.0;
    for (std::size_t k = 1; k < p.nodes.size(); ++k) sum += g.value(p.nodes[k]);
    const AttackPath& b = game.attack_paths[best];
    bool better = sum > best_sum ||
                  (sum == best_sum && (p.hops() < b.hops() || (p.hops() == b.hops() && p.nodes < b.nodes)));
    if (better) {
      best = j;
      best_sum = sum;
    }
  }
  return best;
}

}  // namespace

MixedStrategy make_policy(PlayerSide side, PolicyKind kind, const GameInstance& game,
                          const GameSolution* solution) {
  const std::size_t rows = game.defender_actions.size();
  const std::size_t cols = game.attack_paths.size();
  if (kind == PolicyKind::nash) {
    if (!solution) throw ValidationError("nash policy requires a solved game");
    return side == PlayerSide::defender ? solution->defender_strategy
                                        : solution->attacker_strategy;
  }

  if (side == PlayerSide::attacker) {
    if (kind == PolicyKind::random) return MixedStrategy(cols, 1.0 / static_cast<double>(cols));
    MixedStrategy y(cols, 0.0);
    y[greedy_path(game)] = 1.0;
    return y;
  }

  MixedStrategy x(rows, 0.0);
  const std::size_t budget = static_cast<std::size_t>(game.params.budget);
  if (kind == PolicyKind::random) {
    if (budget == 0) {
      x[0] = 1.0;
      return x;
    }
    std::size_t singles = 0;
    for (const DefenderAction& a : game.defender_actions) singles += a.size() == 1 ? 1 : 0;
    for (std::size_t i = 0; i < rows; ++i)
      if (game.defender_actions[i].size() == 1) x[i] = 1.0 / static_cast<double>(singles);
    return x;
  }

  // Greedy defender: cover the most valuable nodes of the greedy path.
  const AttackPath& path = game.attack_paths[greedy_path(game)];
  std::vector<std::size_t> positions(path.hops());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::ranges::stable_sort(positions, [&](std::size_t a, std::size_t b) {
    const NodeId na = path.nodes[a + 1];
    const NodeId nb = path.nodes[b + 1];
    const double va = game.graph.value(na);
    const double vb = game.graph.value(nb);
    if (va != vb) return va > vb;
    return na < nb;
  });
  positions.resize(std::min(budget, positions.size()));
  DefenderAction chosen;
  for (std::size_t k : positions) chosen.edges.push_back(path.edges[k]);
  std::ranges::sort(chosen.edges);
  auto it = std::ranges::find(game.defender_actions, chosen);
  if (it == game.defender_actions.end())
    throw ValidationError("greedy allocation missing from the defender action list");
  x[static_cast<std::size_t>(it - game.defender_actions.begin())] = 1.0;
  return x;
}

RewardPair expected_reward(const GameInstance& game, std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != game.payoff.rows() || y.size() != game.payoff.cols())
    throw ValidationError("strategy dimensions do not match the game");
  const double d = bilinear(game.payoff, x, y);
  return {d, -d};
}

double capture_proportion(const GameInstance& game, std::span<const double> x,
                          std::span<const double> y, const PinnedHoneypots& pinned) {
  if (x.size() != game.defender_actions.size() || y.size() != game.attack_paths.size())
    throw ValidationError("strategy dimensions do not match the game");
  std::vector<EdgeId> pins;
  for (const Edge& e : pinned.edges)
    if (auto id = game.graph.find_edge(e)) pins.push_back(*id);

  std::vector<char> pinned_hit(game.attack_paths.size(), 0);
  for (std::size_t j = 0; j < game.attack_paths.size(); ++j)
    for (EdgeId e : pins)
      if (game.attack_paths[j].uses(e)) pinned_hit[j] = 1;

  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    const DefenderAction& a = game.defender_actions[i];
    double hit = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] == 0.0) continue;
      bool caught = pinned_hit[j] != 0;
      for (EdgeId e : game.attack_paths[j].edges) {
        if (caught) break;
        caught = a.contains(e);
      }
      if (caught) hit += y[j];
    }
    total += x[i] * hit;
  }
  return std::clamp(total, 0.0, 1.0);
}

EvaluationRow evaluate_pair(const GameInstance& game, const GameSolution& solution,
                            PolicyKind defender, PolicyKind attacker) {
  MixedStrategy x = make_policy(PlayerSide::defender, defender, game, &solution);
  MixedStrategy y = make_policy(PlayerSide::attacker, attacker, game, &solution);
  RewardPair r = expected_reward(game, x, y);
  EvaluationRow row;
  row.defender = defender;
  row.attacker = attacker;
  row.defender_reward = r.defender;
  row.attacker_reward = r.attacker;
  row.capture = capture_proportion(game, x, y);
  row.game_value = solution.value;
  return row;
}

namespace {

bool monotone(std::span<const double> v) {
  return std::ranges::is_sorted(v) || std::ranges::is_sorted(v, std::greater<>{});
}

std::string entry_label(const std::vector<NodeId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ";";
    s += std::to_string(ids[i]);
  }
  return s;
}

}  // namespace

EvaluationResult sweep(const SweepConfig& config, const AttackGraph& g,
                       const GameOptions& options, Execution exec) {
  const bool entries = config.parameter == SweepParameter::entry_nodes;
  const std::size_t points = entries ? config.entry_sets.size() : config.values.size();
  if (points == 0) throw ValidationError("sweep needs at least one value");
  if (!entries && !monotone(config.values)) throw ValidationError("sweep values must be monotone");
  if (config.parameter == SweepParameter::honeypots) {
    for (double v : config.values)
      if (v < 0.0 || v != static_cast<double>(static_cast<int>(v)))
        throw ValidationError("honeypot counts must be nonnegative integers");
  }

  EvaluationResult result{config.parameter, std::vector<EvaluationRow>(points)};
  auto run_point = [&](std::size_t k) {
    GameParams p = config.params;
    GameOptions opts = options;
    double value = 0.0;
    std::string label;
    switch (config.parameter) {
      case SweepParameter::esc:
        p.esc = value = config.values[k];
        label = fixed6(value);
        break;
      case SweepParameter::cap:
        p.cap = value = config.values[k];
        label = fixed6(value);
        break;
      case SweepParameter::honeypots:
        value = config.values[k];
        p.budget = static_cast<int>(value);
        label = std::to_string(p.budget);
        break;
      case SweepParameter::entry_nodes:
        opts.paths.enabled_entries = config.entry_sets[k];
        value = static_cast<double>(config.entry_sets[k].size());
        label = entry_label(config.entry_sets[k]);
        break;
    }
    GameInstance game = build_matrix(g, p, opts, Execution::serial);
    GameSolution sol = solve_zero_sum(game.payoff);
    EvaluationRow row = evaluate_pair(game, sol, config.defender, config.attacker);
    row.label = std::move(label);
    row.value = value;
    result.rows[k] = std::move(row);
  };

  const long n = static_cast<long>(points);
  if (exec == Execution::serial) {
    for (long k = 0; k < n; ++k) run_point(static_cast<std::size_t>(k));
    return result;
  }
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    try {
      run_point(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(decoygraph_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

void write_evaluation_csv(const EvaluationResult& result, std::string_view param_name,
                          std::ostream& out) {
  out << "param,value,def_policy,atk_policy,def_reward,atk_reward,capture\n";
  for (const EvaluationRow& r : result.rows) {
    out << param_name << ',' << r.label << ',' << to_string(r.defender) << ','
        << to_string(r.attacker) << ',' << fixed6(r.defender_reward) << ','
        << fixed6(r.attacker_reward) << ',' << fixed6(r.capture) << '\n';
  }
}

}  // namespace decoygraph
