#include "decoygraph/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "decoygraph/errors.hpp"

namespace decoygraph {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kOptimalityTol = 1e-10;
// Consecutive degenerate pivots before switching to Bland's rule for good.
constexpr int kDegenerateLimit = 50;

/// Dense tableau for: minimize cᵀx s.t. T x = rhs, x ≥ 0, rhs ≥ 0, with a
/// caller-supplied feasible starting basis.
class DenseSimplex {
 public:
  DenseSimplex(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_(rows, cols + 1), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return t_(r, c); }
  double& rhs(std::size_t r) { return t_(r, cols_); }
  double rhs(std::size_t r) const { return t_(r, cols_); }
  std::size_t& basic(std::size_t r) { return basis_[r]; }
  std::size_t basic(std::size_t r) const { return basis_[r]; }
  double reduced_cost(std::size_t c) const { return reduced_[c]; }
  std::size_t rows() const { return rows_; }

  enum class Outcome { optimal, unbounded };

  Outcome minimize(std::span<const double> cost, std::span<const char> allowed) {
    price(cost);
    bool bland = false;
    int degenerate = 0;
    const std::size_t limit = 200 * (rows_ + cols_) + 1000;
    for (std::size_t iter = 0; iter < limit; ++iter) {
      std::size_t enter = cols_;
      double best = -kOptimalityTol;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (!allowed[c] || is_basic(c)) continue;
        if (reduced_[c] < best) {
          enter = c;
          if (bland) break;
          best = reduced_[c];
        }
      }
      if (enter == cols_) return Outcome::optimal;

      std::size_t leave = rows_;
      double ratio = 0.0;
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotTol) continue;
        const double q = rhs(r) / a;
        if (leave == rows_ || q < ratio - 1e-12) {
          leave = r;
          ratio = q;
        } else if (q <= ratio + 1e-12) {
          // Tie: Bland keeps the lowest basic index, otherwise prefer the
          // larger pivot element for stability.
          const bool take = bland ? basis_[r] < basis_[leave] : a > t_(leave, enter);
          if (take) {
            leave = r;
            ratio = std::min(ratio, q);
          }
        }
      }
      if (leave == rows_) return Outcome::unbounded;

      if (ratio <= 1e-12) {
        if (++degenerate > kDegenerateLimit) bland = true;
      } else {
        degenerate = 0;
      }
      pivot(leave, enter);
    }
    throw NumericalError("simplex iteration limit reached");
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = t_(r, c);
    if (std::abs(p) < 1e-12) throw NumericalError("singular pivot in simplex");
    auto prow = t_.row(r);
    for (double& v : prow) v /= p;
    prow[c] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      auto row = t_.row(i);
      for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    const double f = reduced_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= f * prow[j];
      objective_ += f * prow[cols_];
      reduced_[c] = 0.0;
    }
    if (!in_basis_.empty()) {
      in_basis_[basis_[r]] = 0;
      in_basis_[c] = 1;
    }
    basis_[r] = c;
  }

 private:
  bool is_basic(std::size_t c) const { return in_basis_[c] != 0; }

  void price(std::span<const double> cost) {
    in_basis_.assign(cols_, 0);
    for (std::size_t b : basis_) in_basis_[b] = 1;
    reduced_.assign(cost.begin(), cost.end());
    objective_ = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= cb * t_(r, j);
      objective_ += cb * rhs(r);
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  Matrix t_;
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::vector<double> reduced_;
  double objective_ = 0.0;
};

void normalize(MixedStrategy& p) {
  double sum = 0.0;
  for (double& v : p) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) throw NumericalError("degenerate strategy recovered from simplex");
  for (double& v : p) v /= sum;
}

struct RawSolution {
  MixedStrategy rows;
  MixedStrategy cols;
};

// Row player of `a` maximizes.
RawSolution solve_oriented(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  double lowest = *std::min_element(a.data().begin(), a.data().end());
  const double shift = std::max(0.0, 1.0 - lowest);

  DenseSimplex lp(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) lp.at(i, j) = a(i, j) + shift;
    lp.at(i, n + i) = 1.0;
    lp.rhs(i) = 1.0;
    lp.basic(i) = n + i;
  }
  std::vector<double> cost(n + m, 0.0);
  std::fill_n(cost.begin(), n, -1.0);
  std::vector<char> allowed(n + m, 1);
  if (lp.minimize(cost, allowed) != DenseSimplex::Outcome::optimal)
    throw NumericalError("matrix-game LP reported unbounded");

  RawSolution out{MixedStrategy(m, 0.0), MixedStrategy(n, 0.0)};
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t b = lp.basic(r);
    if (b < n) out.cols[b] = lp.rhs(r);
  }
  for (std::size_t i = 0; i < m; ++i) out.rows[i] = lp.reduced_cost(n + i);
  normalize(out.rows);
  normalize(out.cols);
  return out;
}

}  // namespace

GameSolution solve_zero_sum(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw ValidationError("empty payoff matrix");
  double scale = 1.0;
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw ValidationError("payoff matrix has non-finite entries");
    scale = std::max(scale, std::abs(v));
  }

  GameSolution sol;
  if (m.rows() > m.cols()) {
    RawSolution raw = solve_oriented(-m.transposed());
    sol.defender_strategy = std::move(raw.cols);
    sol.attacker_strategy = std::move(raw.rows);
  } else {
    RawSolution raw = solve_oriented(m);
    sol.defender_strategy = std::move(raw.rows);
    sol.attacker_strategy = std::move(raw.cols);
  }
  sol.value = bilinear(m, sol.defender_strategy, sol.attacker_strategy);
  EquilibriumCheck check = verify_equilibrium(m, sol, kGapTolerance * scale);
  sol.defender_gap = check.defender_gap;
  sol.attacker_gap = check.attacker_gap;
  if (!check.pass)
    throw NumericalError("equilibrium check failed: gaps " + std::to_string(check.defender_gap) +
                         ", " + std::to_string(check.attacker_gap));
  return sol;
}

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  auto lower = lp.lower.empty() ? std::vector<double>(n, 0.0) : lp.lower;
  auto upper = lp.upper.empty() ? std::vector<double>(n, std::numeric_limits<double>::infinity())
                                : lp.upper;
  if (lower.size() != n || upper.size() != n) throw ValidationError("LP bound size mismatch");
  if (lp.inequality.rows() != lp.inequality_upper.size() ||
      (lp.inequality.rows() > 0 && lp.inequality.cols() != n))
    throw ValidationError("LP inequality dimensions mismatch");
  if (lp.equality.rows() != lp.equality_rhs.size() ||
      (lp.equality.rows() > 0 && lp.equality.cols() != n))
    throw ValidationError("LP equality dimensions mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(lower[k])) throw ValidationError("LP lower bounds must be finite");
    if (upper[k] < lower[k]) return {LpStatus::infeasible, {}, 0.0};
  }

  // Rows in x' = x − lower: kind 0 is ≤, kind 1 is =.
  struct Row {
    std::vector<double> a;
    double b;
    bool equality;
  };
  std::vector<Row> rows;
  auto shifted_rhs = [&](std::span<const double> a, double b) {
    double s = b;
    for (std::size_t k = 0; k < n; ++k) s -= a[k] * lower[k];
    return s;
  };
  for (std::size_t i = 0; i < lp.inequality.rows(); ++i) {
    auto a = lp.inequality.row(i);
    rows.push_back({{a.begin(), a.end()}, shifted_rhs(a, lp.inequality_upper[i]), false});
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(upper[k])) continue;
    std::vector<double> a(n, 0.0);
    a[k] = 1.0;
    rows.push_back({std::move(a), upper[k] - lower[k], false});
  }
  for (std::size_t i = 0; i < lp.equality.rows(); ++i) {
    auto a = lp.equality.row(i);
    rows.push_back({{a.begin(), a.end()}, shifted_rhs(a, lp.equality_rhs[i]), true});
  }

  const std::size_t m = rows.size();
  std::size_t slacks = 0;
  for (const Row& r : rows) slacks += r.equality ? 0 : 1;
  std::size_t artificials = 0;
  for (const Row& r : rows) artificials += (r.equality || r.b < 0.0) ? 1 : 0;
  const std::size_t cols = n + slacks + artificials;

  DenseSimplex tab(m, cols);
  std::vector<char> is_artificial(cols, 0);
  std::size_t next_slack = n;
  std::size_t next_art = n + slacks;
  for (std::size_t i = 0; i < m; ++i) {
    const Row& r = rows[i];
    const double sign = r.b < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) tab.at(i, k) = sign * r.a[k];
    tab.rhs(i) = sign * r.b;
    if (!r.equality) {
      tab.at(i, next_slack) = sign;
      if (sign > 0.0) tab.basic(i) = next_slack;
      ++next_slack;
    }
    if (r.equality || sign < 0.0) {
      tab.at(i, next_art) = 1.0;
      tab.basic(i) = next_art;
      is_artificial[next_art] = 1;
      ++next_art;
    }
  }

  if (artificials > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c)
      if (is_artificial[c]) phase1[c] = 1.0;
    std::vector<char> all(cols, 1);
    tab.minimize(phase1, all);
    double infeasibility = 0.0;
    double rhs_scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      rhs_scale = std::max(rhs_scale, std::abs(rows[i].b));
      if (is_artificial[tab.basic(i)]) infeasibility += tab.rhs(i);
    }
    if (infeasibility > kFeasibilityTolerance * rhs_scale) return {LpStatus::infeasible, {}, 0.0};
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial[tab.basic(i)]) continue;
      for (std::size_t c = 0; c < n + slacks; ++c) {
        if (std::abs(tab.at(i, c)) > kPivotTol) {
          tab.pivot(i, c);
          break;
        }
      }
    }
  }

  const double sense = lp.sense == LinearProgram::Sense::maximize ? -1.0 : 1.0;
  std::vector<double> cost(cols, 0.0);
  for (std::size_t k = 0; k < n; ++k) cost[k] = sense * lp.objective[k];
  std::vector<char> allowed(cols, 1);
  for (std::size_t c = 0; c < cols; ++c)
    if (is_artificial[c]) allowed[c] = 0;
  if (tab.minimize(cost, allowed) == DenseSimplex::Outcome::unbounded)
    return {LpStatus::unbounded, {}, 0.0};

  LpSolution out{LpStatus::optimal, lower, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t b = tab.basic(i);
    if (b < n) out.x[b] = lower[b] + std::max(0.0, tab.rhs(i));
  }
  out.objective = std::inner_product(lp.objective.begin(), lp.objective.end(), out.x.begin(), 0.0);
  return out;
}

BestResponse best_response(const Matrix& m, std::span<const double> fixed, Responder responder) {
  std::vector<double> payoff;
  if (responder == Responder::column) {
    if (fixed.size() != m.rows()) throw ValidationError("strategy does not match matrix rows");
    payoff.assign(m.cols(), 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) payoff[j] -= fixed[i] * m(i, j);
  } else {
    if (fixed.size() != m.cols()) throw ValidationError("strategy does not match matrix columns");
    payoff.assign(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) payoff[i] += m(i, j) * fixed[j];
  }
  if (payoff.empty()) return {0, -std::numeric_limits<double>::infinity()};
  const double top = *std::ranges::max_element(payoff);
  // Rounding noise must not decide ties, so near-equal payoffs count as tied.
  const double tol = kTieTolerance * std::max(1.0, std::abs(top));
  std::size_t index = 0;
  while (payoff[index] < top - tol) ++index;
  return {index, top};
}

EquilibriumCheck verify_equilibrium(const Matrix& m, const GameSolution& sol, double tol) {
  EquilibriumCheck check;
  if (sol.defender_strategy.size() != m.rows() || sol.attacker_strategy.size() != m.cols())
    return check;
  const double value = bilinear(m, sol.defender_strategy, sol.attacker_strategy);
  const BestResponse row = best_response(m, sol.attacker_strategy, Responder::row);
  const BestResponse col = best_response(m, sol.defender_strategy, Responder::column);
  check.defender_gap = std::max(0.0, row.value - value);
  check.attacker_gap = std::max(0.0, col.value + value);
  check.value_error = std::abs(value - sol.value);
  check.pass = is_distribution(sol.defender_strategy) && is_distribution(sol.attacker_strategy) &&
               check.defender_gap <= tol && check.attacker_gap <= tol && check.value_error <= tol;
  return check;
}

}  // namespace decoygraph
