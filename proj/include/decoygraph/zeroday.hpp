#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "decoygraph/attack_graph.hpp"
#include "decoygraph/game_core.hpp"
#include "decoygraph/lp_solver.hpp"
#include "decoygraph/parallel.hpp"

namespace decoygraph {

/// How much the attacker assumes the defender knows about the zero-day.
///   optimistic : attacker plays the NE of the augmented game; the defender
///                 actually plays the zero-padded base policy.
///   pessimistic: attacker knows the defender is stuck with the base policy.
enum class Criterion { optimistic, pessimistic };

/// Attacker strategy used for the pessimistic column.
///   best_response      : pure best response to the fixed base policy.
///   restricted_equilibrium: NE of the augmented game with the defender
///                         limited to game-1 allocations.
enum class PessimisticAttacker { best_response, restricted_equilibrium };

enum class DominanceClass { dominant, dominated, neither, no_new_path };

std::string_view to_string(Criterion c);
std::string_view to_string(PessimisticAttacker p);
std::string_view to_string(DominanceClass d);

struct ScanOptions {
  Criterion criterion = Criterion::pessimistic;
  PessimisticAttacker pessimistic_attacker = PessimisticAttacker::best_response;
};

struct ZeroDayRow {
  Edge edge;
  CandidateStatus status = CandidateStatus::analyzed;
  double naive = 0.0;        // attacker reward in game 1
  double optimistic = 0.0;   // x̂₁ᵀ R_a(G₂) y₂
  double pessimistic = 0.0;  // x₁ᵀ R_a(G₂) y, y per PessimisticAttacker
  double impact = 0.0;       // selected criterion minus naive
  std::size_t new_path_count = 0;
  double exploit_probability = 0.0;  // criterion attacker mass on paths using e
  DominanceClass dominance = DominanceClass::no_new_path;
};

struct ZeroDayReport {
  ScanOptions options;
  std::vector<ZeroDayRow> rows;
};

/// Game 2 for one candidate edge together with the base policy lifted into it.
struct AugmentedGame {
  GameInstance game;
  MixedStrategy padded_base;
  std::vector<std::size_t> game1_rows;  // game-1 action i lives at game1_rows[i]
  std::vector<std::size_t> new_paths;   // columns that traverse the zero-day edge
  EdgeId zero_day = 0;
};

AugmentedGame augmented_game(const GameInstance& game1, std::span<const double> base,
                             const Edge& e, Execution exec = Execution::serial);

/// Evaluates one candidate against the game-1 equilibrium `sol1`.
ZeroDayRow evaluate_candidate(const GameInstance& game1, const GameSolution& sol1,
                              const Edge& e, const ScanOptions& options = {});

/// Evaluates every analyzed or dominant candidate, in candidate order. The
/// parallel version farms candidates out to OpenMP threads and merges by index.
ZeroDayReport scan_candidates(const GameInstance& game1, const GameSolution& sol1,
                              std::span<const ZeroDayCandidate> candidates,
                              const ScanOptions& options = {},
                              Execution exec = Execution::parallel);

/// Descending impact, ties by ascending (u,v).
void rank_candidates(std::vector<ZeroDayRow>& rows);

/// Strict-dominance classification of the best new path a_e against the
/// fixed defender strategy `x` (over game-1 actions); `y1` is the game-1
/// attacker equilibrium.
DominanceClass check_dominance(const GameInstance& game1, std::span<const double> x,
                               std::span<const double> y1, const Edge& e);

/// CSV: edge_u,edge_v,naive,optimistic,pessimistic,impact,y_e,dominance
void write_report_csv(const ZeroDayReport& report, std::ostream& out);
std::string report_to_json(const ZeroDayReport& report);
ZeroDayReport report_from_json(std::string_view document);

}  // namespace decoygraph
