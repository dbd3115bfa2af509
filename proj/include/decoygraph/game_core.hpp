#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "decoygraph/attack_graph.hpp"
#include "decoygraph/matrix.hpp"
#include "decoygraph/parallel.hpp"

namespace decoygraph {

struct GameParams {
  double cap = 0.0;                  // capture reward per unit node value
  double esc = 0.0;                  // escape gain per unit node value
  double honeypot_cost = 0.0;        // per deployed honeypot
  double attack_cost_per_hop = 0.0;  // attack cost is linear in hop count
  int budget = 0;                    // H
  bool terminate_on_capture = false;
};

/// {"cap":10,"esc":5,"honeypot_cost":1,"attack_cost_per_hop":1,"budget":1,
///  "terminate_on_capture":false}
GameParams load_params(std::string_view document);
GameParams load_params_file(const std::filesystem::path& path);
std::string params_to_json(const GameParams& p);

/// Throws ValidationError on negative magnitudes or budget > edge count.
void validate_params(const GameParams& p, const AttackGraph& g);

/// A honeypot allocation: sorted edge ids, at most H of them.
struct DefenderAction {
  std::vector<EdgeId> edges;

  bool contains(EdgeId e) const;
  std::size_t size() const { return edges.size(); }
  auto operator<=>(const DefenderAction&) const = default;
};

std::string to_string(const DefenderAction& a, const AttackGraph& g);

/// Honeypots deployed on top of every allocation draw. Identified by endpoint
/// pair because they may sit on a zero-day edge absent from G₁. Each costs
/// C_d whether or not the edge exists in the graph being evaluated.
struct PinnedHoneypots {
  std::vector<Edge> edges;

  bool empty() const { return edges.empty(); }
};

/// All edge subsets of size 0..H ordered by (size, lexicographic edge ids).
std::vector<DefenderAction> defender_actions(const AttackGraph& g, const GameParams& p,
                                             std::size_t cap = kDefaultEnumerationCap);

/// Defender reward for one action profile:
///   Σ over non-entry path nodes i of (Cap·v(i) if the path edge entering i
///   carries a honeypot, else −Esc·v(i))  −  C_d·|a_d|  +  c_a·hops.
/// With terminate_on_capture the node sum stops after the first capture.
double reward(const AttackGraph& g, const GameParams& p, const DefenderAction& defender,
              const AttackPath& attack);

/// Same as reward() with `pins` added to the allocation; pins on edges absent
/// from g still cost C_d but capture nothing.
double mitigated_reward(const AttackGraph& g, const GameParams& p,
                        const DefenderAction& defender, const AttackPath& attack,
                        const PinnedHoneypots& pins);

struct GameOptions {
  PathOptions paths;
  std::size_t action_cap = kDefaultEnumerationCap;
};

/// Zero-sum game on an attack graph. `payoff` is the defender payoff R_d
/// indexed [defender action][attack path]; the attacker payoff is −R_d.
struct GameInstance {
  AttackGraph graph;
  GameParams params;
  GameOptions options;
  std::vector<DefenderAction> defender_actions;
  std::vector<AttackPath> attack_paths;
  Matrix payoff;

  Matrix attacker_payoff() const { return -payoff; }
};

/// Fills R_d cell by cell. The parallel kernel splits rows across OpenMP
/// threads; every cell is evaluated by the same formula, so both policies
/// return bitwise-identical matrices.
Matrix payoff_matrix(const AttackGraph& g, const GameParams& p,
                     std::span<const DefenderAction> defender,
                     std::span<const AttackPath> attacks, const PinnedHoneypots& pins = {},
                     Execution exec = Execution::parallel);

GameInstance build_matrix(const AttackGraph& g, const GameParams& p,
                          const GameOptions& options = {},
                          Execution exec = Execution::parallel);

/// Lifts a game-1 defender strategy into game 2's action ordering; actions
/// that touch edges unknown to game 1 get zero mass. Throws ValidationError
/// if some game-1 action is missing from game 2.
MixedStrategy pad_strategy(std::span<const double> x1, const GameInstance& game1,
                           const GameInstance& game2);

/// Index of each game-1 defender action inside game 2's ordering.
std::vector<std::size_t> align_actions(const GameInstance& game1, const GameInstance& game2);

}  // namespace decoygraph
