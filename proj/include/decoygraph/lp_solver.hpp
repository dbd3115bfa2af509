#pragma once

#include <limits>
#include <span>
#include <vector>

#include "decoygraph/matrix.hpp"

namespace decoygraph {

inline constexpr double kGapTolerance = 1e-6;
inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kTieTolerance = 1e-9;

/// Equilibrium of a zero-sum matrix game whose row player maximizes.
struct GameSolution {
  MixedStrategy defender_strategy;  // rows
  MixedStrategy attacker_strategy;  // columns
  double value = 0.0;               // x*ᵀ M y*
  double defender_gap = 0.0;        // best pure row payoff against y* minus value
  double attacker_gap = 0.0;        // value minus worst pure column payoff against x*
};

/// Maximin strategies via the classic positive-shift LP
///   max 1ᵀw  s.t.  (M + s)·w ≤ 1, w ≥ 0,     s = max(0, 1 − min M)
/// solved with a dense simplex; the row strategy is read off the duals. The
/// program is built on whichever of M or −Mᵀ has fewer rows. Throws
/// NumericalError if the recovered pair fails the gap check.
GameSolution solve_zero_sum(const Matrix& m);

/// minimize/maximize cᵀx
///   s.t. A_ub x ≤ b_ub,  A_eq x = b_eq,  lower ≤ x ≤ upper
/// Lower bounds must be finite; upper bounds may be +inf.
struct LinearProgram {
  enum class Sense { minimize, maximize };

  Sense sense = Sense::minimize;
  std::vector<double> objective;
  Matrix inequality;
  std::vector<double> inequality_upper;
  Matrix equality;
  std::vector<double> equality_rhs;
  std::vector<double> lower;  // defaults to 0 when empty
  std::vector<double> upper;  // defaults to +inf when empty
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

/// Two-phase dense simplex. Infeasible and unbounded programs are reported via
/// `status`; malformed programs throw ValidationError and numerical breakdown
/// throws NumericalError.
LpSolution solve_lp(const LinearProgram& lp);

enum class Responder { row, column };

struct BestResponse {
  std::size_t index = 0;
  double value = 0.0;  // in the responder's own payoff (column payoff is −M)
};

/// Pure best response of `responder` against the other side's fixed mixed
/// strategy. Payoffs within kTieTolerance·max(1,|best|) of the best are tied
/// and the lowest tied index wins; `value` is the best payoff itself.
BestResponse best_response(const Matrix& m, std::span<const double> fixed, Responder responder);

struct EquilibriumCheck {
  bool pass = false;
  double defender_gap = 0.0;
  double attacker_gap = 0.0;
  double value_error = 0.0;
};

/// Recomputes both best-response gaps from scratch.
EquilibriumCheck verify_equilibrium(const Matrix& m, const GameSolution& sol,
                                    double tol = kGapTolerance);

}  // namespace decoygraph
