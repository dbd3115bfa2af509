#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decoygraph/attack_graph.hpp"
#include "decoygraph/game_core.hpp"
#include "decoygraph/lp_solver.hpp"
#include "decoygraph/parallel.hpp"

namespace decoygraph {

enum class PlayerSide { defender, attacker };
enum class PolicyKind { nash, greedy, random };

std::string_view to_string(PolicyKind k);
PolicyKind parse_policy_kind(std::string_view s);

/// nash   : the equilibrium strategy from `solution` (required).
/// greedy : attacker: pure on the path with the largest non-entry value sum
///           (ties: fewer hops, then lexicographic). Defender: pure on the
///           incoming path edges of the H most valuable nodes of that path.
/// random : attacker: uniform over paths. Defender: uniform over single-edge
///           allocations (pure ∅ when H = 0).
MixedStrategy make_policy(PlayerSide side, PolicyKind kind, const GameInstance& game,
                          const GameSolution* solution = nullptr);

struct RewardPair {
  double defender = 0.0;
  double attacker = 0.0;
};

RewardPair expected_reward(const GameInstance& game, std::span<const double> x,
                           std::span<const double> y);

/// Exact probability that the sampled path crosses a honeypot, counting the
/// allocation draw and any pinned honeypots that exist in the game's graph.
double capture_proportion(const GameInstance& game, std::span<const double> x,
                          std::span<const double> y, const PinnedHoneypots& pinned = {});

enum class SweepParameter { esc, cap, honeypots, entry_nodes };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view s);

struct SweepConfig {
  SweepParameter parameter = SweepParameter::esc;
  std::vector<double> values;                   // esc, cap, honeypots
  std::vector<std::vector<NodeId>> entry_sets;  // entry_nodes
  GameParams params;
  PolicyKind defender = PolicyKind::nash;
  PolicyKind attacker = PolicyKind::nash;
};

struct EvaluationRow {
  std::string label;  // printed value column
  double value = 0.0;
  PolicyKind defender = PolicyKind::nash;
  PolicyKind attacker = PolicyKind::nash;
  double defender_reward = 0.0;
  double attacker_reward = 0.0;
  double capture = 0.0;
  double game_value = 0.0;
};

struct EvaluationResult {
  SweepParameter parameter = SweepParameter::esc;
  std::vector<EvaluationRow> rows;
};

/// Evaluates one policy pair on a solved game.
EvaluationRow evaluate_pair(const GameInstance& game, const GameSolution& solution,
                            PolicyKind defender, PolicyKind attacker);

/// One row per configured value, in configured order. Points are independent
/// and run on OpenMP threads in the parallel version.
EvaluationResult sweep(const SweepConfig& config, const AttackGraph& g,
                       const GameOptions& options = {}, Execution exec = Execution::parallel);

/// CSV: param,value,def_policy,atk_policy,def_reward,atk_reward,capture
void write_evaluation_csv(const EvaluationResult& result, std::string_view param_name,
                          std::ostream& out);

}  // namespace decoygraph
