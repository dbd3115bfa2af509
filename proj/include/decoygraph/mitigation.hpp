#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decoygraph/game_core.hpp"
#include "decoygraph/lp_solver.hpp"
#include "decoygraph/parallel.hpp"
#include "decoygraph/zeroday.hpp"

namespace decoygraph {

enum class MitigationKind { alpha, lp, nature, critical_point, none, random };

std::string_view to_string(MitigationKind k);
MitigationKind parse_mitigation_kind(std::string_view s);

/// How `distribution` turns into deployed honeypots.
///   exclusive  : at most one location is pinned, location e with probability p(e).
///   independent: each location is pinned independently with probability p(e).
enum class DistributionMode { exclusive, independent };

struct WeightedEdge {
  Edge edge;
  double probability = 0.0;
};

struct MitigationPlan {
  MitigationKind kind = MitigationKind::none;
  std::vector<Edge> pinned;  // deterministic extra honeypots
  std::vector<WeightedEdge> distribution;
  DistributionMode distribution_mode = DistributionMode::exclusive;
  std::optional<MixedStrategy> modified_base_policy;  // over game-1 actions
  std::vector<NodeId> critical_nodes;
  double kappa = 1.0;
  std::optional<double> objective;  // J(x) for lp, game value for nature/critical
};

struct PinScenario {
  PinnedHoneypots pins;
  double weight = 1.0;
};

/// Expands a plan into weighted deterministic pin sets (weights sum to 1).
std::vector<PinScenario> pin_scenarios(const MitigationPlan& plan);

MitigationPlan no_mitigation();

/// Pins one honeypot on each of the k highest-impact rows.
MitigationPlan alpha_mitigation(const ZeroDayReport& report, std::size_t k);

/// Pins k distinct rows drawn uniformly with a seeded mt19937_64.
MitigationPlan random_mitigation(const ZeroDayReport& report, std::uint64_t seed,
                                 std::size_t k = 1);

struct LpMitigationInput {
  std::vector<Edge> candidates;
  std::vector<double> probability;  // P(e)
  std::vector<double> impact;       // i(e)
  std::vector<double> exploit;      // y(e)
  double budget = 1.0;              // Σ x(e) ≤ budget
};

/// Uniform P over every evaluated row of the report.
LpMitigationInput lp_input_from_report(const ZeroDayReport& report, double budget = 1.0);

/// J(x) = Σ P(e)·i(e)·(1 − y(e)·x(e)).
double weighted_residual(const LpMitigationInput& input, std::span<const double> x);

/// Minimizes J over 0 ≤ x ≤ 1, Σx ≤ budget.
MitigationPlan lp_mitigation(const LpMitigationInput& input);

/// Auxiliary defender-vs-nature game over candidate locations.
struct NatureGame {
  std::vector<Edge> locations;
  Matrix payoff;  // defender payoff [mitigated location][exploited location]
  GameSolution solution;
};

NatureGame solve_nature_game(std::vector<Edge> locations, Matrix payoff);

/// Off-diagonal: the defender's unmitigated criterion reward on G₂(j).
/// Diagonal: the base policy plus a pinned honeypot at location i, against the
/// attacker's best response on G₂(i).
NatureGame nature_game(const GameInstance& game1, const GameSolution& sol1,
                       std::span<const ZeroDayRow> locations, Criterion criterion);

MitigationPlan nature_mitigation(const NatureGame& game);

struct CriticalPointOptions {
  double kappa = 1.5;
  std::size_t top = 3;  // how many top-impact rows feed the critical set
  bool add_honeypot = false;
};

/// Boosts v(i) by kappa on endpoints of top-impact edges that lie on at least
/// two game-1 attack paths and re-solves for a modified base policy.
MitigationPlan critical_point_mitigation(const GameInstance& game1, const GameSolution& sol1,
                                         const ZeroDayReport& report,
                                         const CriticalPointOptions& options = {});

struct CandidateOutcome {
  Edge edge;
  double reward_before = 0.0;  // unmitigated base policy, attacker reward
  double reward_after = 0.0;
  double reference = 0.0;      // attacker reward on G₁ against the mitigated defender
  bool prevented = false;
  double capture_before = 0.0;
  double capture_after = 0.0;
};

struct MitigationMetrics {
  Criterion criterion = Criterion::pessimistic;
  std::vector<CandidateOutcome> candidates;
  double effectiveness = 0.0;
  double capture_before = 0.0;  // means over candidates
  double capture_after = 0.0;
};

/// Re-evaluates every report row against the mitigated defender.
MitigationMetrics evaluate_mitigation(const MitigationPlan& plan, const GameInstance& game1,
                                      const GameSolution& sol1, const ZeroDayReport& report,
                                      Criterion criterion,
                                      Execution exec = Execution::parallel);

/// Batch version sharing the per-candidate game-2 construction across plans.
std::vector<MitigationMetrics> evaluate_mitigations(std::span<const MitigationPlan> plans,
                                                    const GameInstance& game1,
                                                    const GameSolution& sol1,
                                                    const ZeroDayReport& report,
                                                    Criterion criterion,
                                                    Execution exec = Execution::parallel);

std::string plan_to_json(const MitigationPlan& plan, const MitigationMetrics& metrics);

struct PlanDocument {
  MitigationPlan plan;
  MitigationMetrics metrics;
};

/// Parses and validates a document written by plan_to_json.
PlanDocument plan_from_json(std::string_view document);

}  // namespace decoygraph
