#include "decoygraph/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>

#include "decoygraph/errors.hpp"
#include "decoygraph/evaluation.hpp"
#include "decoygraph/format.hpp"
#include "json.hpp"

namespace decoygraph {

using nlohmann::json;

std::string_view to_string(MitigationKind k) {
  switch (k) {
    case MitigationKind::alpha:
      return "alpha";
    case MitigationKind::lp:
      return "lp";
    case MitigationKind::nature:
      return "nature";
    case MitigationKind::critical_point:
      return "critical";
    case MitigationKind::none:
      return "none";
    case MitigationKind::random:
      return "random";
  }
  return "none";
}

MitigationKind parse_mitigation_kind(std::string_view s) {
  if (s == "alpha") return MitigationKind::alpha;
  if (s == "lp") return MitigationKind::lp;
  if (s == "nature") return MitigationKind::nature;
  if (s == "critical" || s == "critical_point") return MitigationKind::critical_point;
  if (s == "none") return MitigationKind::none;
  if (s == "random") return MitigationKind::random;
  throw ValidationError("unknown mitigation strategy \"" + std::string(s) + "\"");
}

namespace {

constexpr std::size_t kMaxIndependentSupport = 20;
constexpr double kMassEpsilon = 1e-12;
constexpr double kPreventTol = 1e-6;

PinnedHoneypots with_pin(std::vector<Edge> base, const Edge& extra) {
  if (std::ranges::find(base, extra) == base.end()) base.push_back(extra);
  return {std::move(base)};
}

std::vector<ZeroDayRow> ranked(const ZeroDayReport& report) {
  std::vector<ZeroDayRow> rows = report.rows;
  rank_candidates(rows);
  return rows;
}

}  // namespace

std::vector<PinScenario> pin_scenarios(const MitigationPlan& plan) {
  std::vector<Edge> base;
  for (const Edge& e : plan.pinned)
    if (std::ranges::find(base, e) == base.end()) base.push_back(e);

  std::vector<WeightedEdge> support;
  for (const WeightedEdge& w : plan.distribution) {
    if (w.probability < 0.0 || w.probability > 1.0 + 1e-9)
      throw ValidationError("distribution entry outside [0,1] on " + to_string(w.edge));
    if (w.probability > kMassEpsilon) support.push_back({w.edge, std::min(w.probability, 1.0)});
  }
  if (support.empty()) return {{{base}, 1.0}};

  std::vector<PinScenario> out;
  if (plan.distribution_mode == DistributionMode::exclusive) {
    double total = 0.0;
    for (const WeightedEdge& w : support) {
      out.push_back({with_pin(base, w.edge), w.probability});
      total += w.probability;
    }
    if (total > 1.0 + 1e-9) throw ValidationError("exclusive distribution sums above 1");
    if (1.0 - total > kMassEpsilon) out.push_back({{base}, 1.0 - total});
    return out;
  }

  if (support.size() > kMaxIndependentSupport)
    throw ValidationError("independent distribution support exceeds " +
                          std::to_string(kMaxIndependentSupport) + " edges");
  const std::size_t n = support.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double weight = 1.0;
    std::vector<Edge> pins = base;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) {
        weight *= support[b].probability;
        if (std::ranges::find(pins, support[b].edge) == pins.end()) pins.push_back(support[b].edge);
      } else {
        weight *= 1.0 - support[b].probability;
      }
    }
    if (weight > 0.0) out.push_back({{std::move(pins)}, weight});
  }
  return out;
}

MitigationPlan no_mitigation() { return {}; }

MitigationPlan alpha_mitigation(const ZeroDayReport& report, std::size_t k) {
  if (report.rows.empty()) throw ValidationError("alpha mitigation needs a nonempty report");
  if (k == 0 || k > report.rows.size())
    throw ValidationError("alpha k must be in [1, " + std::to_string(report.rows.size()) + "]");
  MitigationPlan plan;
  plan.kind = MitigationKind::alpha;
  std::vector<ZeroDayRow> rows = ranked(report);
  for (std::size_t i = 0; i < k; ++i) plan.pinned.push_back(rows[i].edge);
  return plan;
}

MitigationPlan random_mitigation(const ZeroDayReport& report, std::uint64_t seed, std::size_t k) {
  const std::size_t n = report.rows.size();
  if (n == 0) throw ValidationError("random mitigation needs a nonempty report");
  if (k == 0 || k > n) throw ValidationError("random k must be in [1, " + std::to_string(n) + "]");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  MitigationPlan plan;
  plan.kind = MitigationKind::random;
  for (std::size_t t = 0; t < k; ++t) {
    std::size_t j = t + static_cast<std::size_t>(rng() % (n - t));
    std::swap(idx[t], idx[j]);
    plan.pinned.push_back(report.rows[idx[t]].edge);
  }
  return plan;
}

LpMitigationInput lp_input_from_report(const ZeroDayReport& report, double budget) {
  LpMitigationInput in;
  in.budget = budget;
  const double p = report.rows.empty() ? 0.0 : 1.0 / static_cast<double>(report.rows.size());
  for (const ZeroDayRow& r : report.rows) {
    in.candidates.push_back(r.edge);
    in.probability.push_back(p);
    in.impact.push_back(r.impact);
    in.exploit.push_back(r.exploit_probability);
  }
  return in;
}

namespace {

void validate_lp_input(const LpMitigationInput& in) {
  const std::size_t n = in.candidates.size();
  if (in.probability.size() != n || in.impact.size() != n || in.exploit.size() != n)
    throw ValidationError("lp mitigation inputs have mismatched lengths");
  if (!(in.budget >= 0.0)) throw ValidationError("mitigation budget must be nonnegative");
  double total = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    if (in.probability[e] < 0.0) throw ValidationError("negative existence probability");
    if (in.exploit[e] < 0.0 || in.exploit[e] > 1.0)
      throw ValidationError("exploit probability outside [0,1]");
    total += in.probability[e];
  }
  if (n > 0 && std::abs(total - 1.0) > 1e-9)
    throw ValidationError("existence probabilities must sum to 1");
}

}  // namespace

double weighted_residual(const LpMitigationInput& input, std::span<const double> x) {
  if (x.size() != input.candidates.size())
    throw ValidationError("mitigation vector length does not match candidates");
  double j = 0.0;
  for (std::size_t e = 0; e < x.size(); ++e)
    j += input.probability[e] * input.impact[e] * (1.0 - input.exploit[e] * x[e]);
  return j;
}

MitigationPlan lp_mitigation(const LpMitigationInput& input) {
  validate_lp_input(input);
  const std::size_t n = input.candidates.size();
  MitigationPlan plan;
  plan.kind = MitigationKind::lp;
  std::vector<double> x(n, 0.0);

  if (n > 0) {
    // J(x) = Σ P·i − Σ P·i·y·x, so minimizing J minimizes the second sum's negation.
    LinearProgram lp;
    lp.sense = LinearProgram::Sense::minimize;
    lp.objective.resize(n);
    lp.upper.assign(n, 1.0);
    lp.lower.assign(n, 0.0);
    for (std::size_t e = 0; e < n; ++e) {
      lp.objective[e] = -input.probability[e] * input.impact[e] * input.exploit[e];
      if (!(lp.objective[e] < 0.0)) lp.upper[e] = 0.0;  // no gain: leave unallocated
    }
    lp.inequality = Matrix(1, n, 1.0);
    lp.inequality_upper = {input.budget};
    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal)
      throw NumericalError(sol.status == LpStatus::infeasible ? "mitigation LP infeasible"
                                                              : "mitigation LP unbounded");
    for (std::size_t e = 0; e < n; ++e) x[e] = std::clamp(sol.x[e], 0.0, 1.0);
  }

  double total = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    if (x[e] <= kMassEpsilon) continue;
    plan.distribution.push_back({input.candidates[e], x[e]});
    total += x[e];
  }
  plan.distribution_mode =
      total <= 1.0 + 1e-9 ? DistributionMode::exclusive : DistributionMode::independent;
  plan.objective = weighted_residual(input, x);
  return plan;
}

NatureGame solve_nature_game(std::vector<Edge> locations, Matrix payoff) {
  if (locations.empty()) throw ValidationError("nature game needs at least one location");
  if (payoff.rows() != locations.size() || payoff.cols() != locations.size())
    throw ValidationError("nature game payoff must be square over the location list");
  GameSolution sol = solve_zero_sum(payoff);
  return {std::move(locations), std::move(payoff), std::move(sol)};
}

NatureGame nature_game(const GameInstance& game1, const GameSolution& sol1,
                       std::span<const ZeroDayRow> locations, Criterion criterion) {
  const std::size_t n = locations.size();
  if (n == 0) throw ValidationError("nature game needs at least one location");
  std::vector<Edge> edges;
  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    edges.push_back(locations[j].edge);
    const ZeroDayRow& r = locations[j];
    const double unmitigated =
        -(criterion == Criterion::optimistic ? r.optimistic : r.pessimistic);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = unmitigated;
  }
  for (std::size_t i = 0; i < n; ++i) {
    AugmentedGame ag = augmented_game(game1, sol1.defender_strategy, edges[i]);
    Matrix pinned = payoff_matrix(ag.game.graph, ag.game.params, ag.game.defender_actions,
                                  ag.game.attack_paths, PinnedHoneypots{{edges[i]}},
                                  Execution::serial);
    m(i, i) = -best_response(pinned, ag.padded_base, Responder::column).value;
  }
  return solve_nature_game(std::move(edges), std::move(m));
}

MitigationPlan nature_mitigation(const NatureGame& game) {
  MitigationPlan plan;
  plan.kind = MitigationKind::nature;
  plan.distribution_mode = DistributionMode::exclusive;
  for (std::size_t i = 0; i < game.locations.size(); ++i) {
    const double p = game.solution.defender_strategy[i];
    if (p > kMassEpsilon) plan.distribution.push_back({game.locations[i], p});
  }
  plan.objective = game.solution.value;
  return plan;
}

MitigationPlan critical_point_mitigation(const GameInstance& game1, const GameSolution& sol1,
                                         const ZeroDayReport& report,
                                         const CriticalPointOptions& options) {
  if (!(options.kappa >= 1.0)) throw ValidationError("kappa must be at least 1");
  MitigationPlan plan;
  plan.kind = MitigationKind::critical_point;
  plan.kappa = options.kappa;

  std::vector<ZeroDayRow> rows = ranked(report);
  std::vector<ZeroDayRow> top;
  for (const ZeroDayRow& r : rows) {
    if (top.size() == options.top) break;
    if (r.impact > 1e-9) top.push_back(r);
  }

  const AttackGraph& g = game1.graph;
  auto on_paths = [&](NodeId id) {
    std::size_t count = 0;
    for (const AttackPath& p : game1.attack_paths)
      if (std::ranges::find(p.nodes, id) != p.nodes.end()) ++count;
    return count;
  };
  for (const ZeroDayRow& r : top) {
    for (NodeId id : {r.edge.from, r.edge.to}) {
      if (!g.has_node(id)) continue;
      if (on_paths(id) >= 2) plan.critical_nodes.push_back(id);
    }
  }
  std::ranges::sort(plan.critical_nodes);
  plan.critical_nodes.erase(std::unique(plan.critical_nodes.begin(), plan.critical_nodes.end()),
                            plan.critical_nodes.end());

  if (plan.critical_nodes.empty()) {
    plan.modified_base_policy = sol1.defender_strategy;
    plan.objective = sol1.value;
  } else {
    AttackGraph scaled = g.with_scaled_values(plan.critical_nodes, options.kappa);
    GameInstance modified = build_matrix(scaled, game1.params, game1.options, Execution::serial);
    if (modified.defender_actions != game1.defender_actions)
      throw NumericalError("value scaling changed the defender action set");
    GameSolution sol = solve_zero_sum(modified.payoff);
    plan.modified_base_policy = sol.defender_strategy;
    plan.objective = sol.value;
  }
  if (options.add_honeypot && !top.empty()) plan.pinned.push_back(top.front().edge);
  return plan;
}

namespace {

bool any_pin_present(const AttackGraph& g, const PinnedHoneypots& pins) {
  return std::ranges::any_of(pins.edges, [&](const Edge& e) { return g.find_edge(e).has_value(); });
}

// Defender payoff with `pins` added to every allocation. When no pin lands on
// an edge of the game, pins only add their cost.
Matrix pinned_payoff(const GameInstance& game, const PinnedHoneypots& pins) {
  if (pins.empty()) return game.payoff;
  if (any_pin_present(game.graph, pins))
    return payoff_matrix(game.graph, game.params, game.defender_actions, game.attack_paths, pins,
                         Execution::serial);
  Matrix m = game.payoff;
  const double cost = game.params.honeypot_cost * static_cast<double>(pins.edges.size());
  for (std::size_t k = 0; k < m.rows() * m.cols(); ++k) m.data()[k] -= cost;
  return m;
}

Matrix mixed_payoff(const GameInstance& game, std::span<const PinScenario> scenarios) {
  if (scenarios.size() == 1) return pinned_payoff(game, scenarios.front().pins);
  Matrix mix(game.payoff.rows(), game.payoff.cols(), 0.0);
  for (const PinScenario& s : scenarios) {
    Matrix m = pinned_payoff(game, s.pins);
    for (std::size_t k = 0; k < mix.rows() * mix.cols(); ++k) mix.data()[k] += s.weight * m.data()[k];
  }
  return mix;
}

struct PreparedPlan {
  std::vector<PinScenario> scenarios;
  MixedStrategy base;  // over game-1 actions
  double reference = 0.0;
};

struct Response {
  MixedStrategy y;
  double attacker_reward = 0.0;
};

Response respond(const Matrix& r, std::span<const double> x, Criterion criterion) {
  Response out;
  if (criterion == Criterion::pessimistic) {
    BestResponse br = best_response(r, x, Responder::column);
    out.y.assign(r.cols(), 0.0);
    out.y[br.index] = 1.0;
    out.attacker_reward = br.value;
  } else {
    out.y = solve_zero_sum(r).attacker_strategy;
    out.attacker_reward = -bilinear(r, x, out.y);
  }
  return out;
}

MixedStrategy lift(const AugmentedGame& ag, std::span<const double> base) {
  MixedStrategy x(ag.game.defender_actions.size(), 0.0);
  for (std::size_t i = 0; i < ag.game1_rows.size(); ++i) x[ag.game1_rows[i]] = base[i];
  return x;
}

}  // namespace

std::vector<MitigationMetrics> evaluate_mitigations(std::span<const MitigationPlan> plans,
                                                    const GameInstance& game1,
                                                    const GameSolution& sol1,
                                                    const ZeroDayReport& report,
                                                    Criterion criterion, Execution exec) {
  std::vector<PreparedPlan> prepared;
  for (const MitigationPlan& plan : plans) {
    PreparedPlan pp;
    pp.scenarios = pin_scenarios(plan);
    pp.base = plan.modified_base_policy.value_or(sol1.defender_strategy);
    if (pp.base.size() != game1.defender_actions.size())
      throw ValidationError("modified base policy does not match the game-1 action count");
    Matrix r1 = mixed_payoff(game1, pp.scenarios);
    pp.reference = best_response(r1, pp.base, Responder::column).value;
    prepared.push_back(std::move(pp));
  }

  const std::size_t rows = report.rows.size();
  std::vector<MitigationMetrics> out(plans.size());
  for (MitigationMetrics& m : out) {
    m.criterion = criterion;
    m.candidates.resize(rows);
  }

  auto run_row = [&](std::size_t k) {
    const Edge& e = report.rows[k].edge;
    AugmentedGame ag = augmented_game(game1, sol1.defender_strategy, e);
    Response before = respond(ag.game.payoff, ag.padded_base, criterion);
    const double capture_before = capture_proportion(ag.game, ag.padded_base, before.y);
    for (std::size_t p = 0; p < prepared.size(); ++p) {
      const PreparedPlan& pp = prepared[p];
      MixedStrategy x = lift(ag, pp.base);
      Matrix mix = mixed_payoff(ag.game, pp.scenarios);
      Response after = respond(mix, x, criterion);
      double capture_after = 0.0;
      for (const PinScenario& s : pp.scenarios)
        capture_after += s.weight * capture_proportion(ag.game, x, after.y, s.pins);
      CandidateOutcome& c = out[p].candidates[k];
      c.edge = e;
      c.reward_before = before.attacker_reward;
      c.reward_after = after.attacker_reward;
      c.reference = pp.reference;
      c.prevented = after.attacker_reward <= pp.reference + kPreventTol;
      c.capture_before = capture_before;
      c.capture_after = std::clamp(capture_after, 0.0, 1.0);
    }
  };

  const long n = static_cast<long>(rows);
  if (exec == Execution::serial) {
    for (long k = 0; k < n; ++k) run_row(static_cast<std::size_t>(k));
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
      try {
        run_row(static_cast<std::size_t>(k));
      } catch (...) {
#pragma omp critical(decoygraph_mitigation_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  for (MitigationMetrics& m : out) {
    if (rows == 0) continue;
    std::size_t prevented = 0;
    for (const CandidateOutcome& c : m.candidates) {
      prevented += c.prevented ? 1 : 0;
      m.capture_before += c.capture_before;
      m.capture_after += c.capture_after;
    }
    const double count = static_cast<double>(rows);
    m.effectiveness = static_cast<double>(prevented) / count;
    m.capture_before /= count;
    m.capture_after /= count;
  }
  return out;
}

MitigationMetrics evaluate_mitigation(const MitigationPlan& plan, const GameInstance& game1,
                                      const GameSolution& sol1, const ZeroDayReport& report,
                                      Criterion criterion, Execution exec) {
  return evaluate_mitigations(std::span<const MitigationPlan>(&plan, 1), game1, sol1, report,
                              criterion, exec)
      .front();
}

namespace {

json edge_json(const Edge& e) { return json::array({e.from, e.to}); }

Edge edge_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("edge must be a [u, v] pair");
  return {j.at(0).get<NodeId>(), j.at(1).get<NodeId>()};
}

double unit_interval(const json& j, const char* what) {
  double v = j.get<double>();
  if (v < 0.0 || v > 1.0) throw ValidationError(std::string(what) + " outside [0,1]");
  return v;
}

}  // namespace

std::string plan_to_json(const MitigationPlan& plan, const MitigationMetrics& metrics) {
  json doc;
  doc["kind"] = to_string(plan.kind);
  doc["pinned"] = json::array();
  for (const Edge& e : plan.pinned) doc["pinned"].push_back(edge_json(e));
  doc["distribution_mode"] =
      plan.distribution_mode == DistributionMode::exclusive ? "exclusive" : "independent";
  doc["distribution"] = json::array();
  for (const WeightedEdge& w : plan.distribution)
    doc["distribution"].push_back({{"edge", edge_json(w.edge)}, {"probability", round6(w.probability)}});
  if (plan.modified_base_policy) {
    json x = json::array();
    for (double v : *plan.modified_base_policy) x.push_back(round6(v));
    doc["modified_base_policy"] = std::move(x);
  } else {
    doc["modified_base_policy"] = nullptr;
  }
  doc["critical_nodes"] = plan.critical_nodes;
  doc["kappa"] = round6(plan.kappa);
  doc["objective"] = plan.objective ? json(round6(*plan.objective)) : json(nullptr);
  doc["criterion"] = to_string(metrics.criterion);
  doc["exploit_probability_source"] = to_string(metrics.criterion);
  doc["candidates"] = json::array();
  for (const CandidateOutcome& c : metrics.candidates) {
    doc["candidates"].push_back({{"edge", edge_json(c.edge)},
                                 {"reward_before", round6(c.reward_before)},
                                 {"reward_after", round6(c.reward_after)},
                                 {"reference", round6(c.reference)},
                                 {"prevented", c.prevented},
                                 {"capture_before", round6(c.capture_before)},
                                 {"capture_after", round6(c.capture_after)}});
  }
  doc["effectiveness"] = round6(metrics.effectiveness);
  doc["capture_before"] = round6(metrics.capture_before);
  doc["capture_after"] = round6(metrics.capture_after);
  return doc.dump(2);
}

PlanDocument plan_from_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("plan parse error: ") + e.what());
  }
  PlanDocument out;
  MitigationPlan& plan = out.plan;
  MitigationMetrics& m = out.metrics;
  try {
    plan.kind = parse_mitigation_kind(doc.at("kind").get<std::string>());
    for (const json& e : doc.at("pinned")) plan.pinned.push_back(edge_from(e));
    const std::string mode = doc.at("distribution_mode").get<std::string>();
    if (mode == "exclusive") {
      plan.distribution_mode = DistributionMode::exclusive;
    } else if (mode == "independent") {
      plan.distribution_mode = DistributionMode::independent;
    } else {
      throw ValidationError("bad distribution_mode " + mode);
    }
    double total = 0.0;
    for (const json& w : doc.at("distribution")) {
      WeightedEdge we{edge_from(w.at("edge")), unit_interval(w.at("probability"), "probability")};
      total += we.probability;
      plan.distribution.push_back(we);
    }
    if (plan.distribution_mode == DistributionMode::exclusive && total > 1.0 + 1e-5)
      throw ValidationError("exclusive distribution sums above 1");
    if (!doc.at("modified_base_policy").is_null()) {
      MixedStrategy x = doc.at("modified_base_policy").get<MixedStrategy>();
      if (!is_distribution(x, 1e-5)) throw ValidationError("modified base policy is not a distribution");
      plan.modified_base_policy = std::move(x);
    }
    plan.critical_nodes = doc.at("critical_nodes").get<std::vector<NodeId>>();
    plan.kappa = doc.at("kappa").get<double>();
    if (plan.kappa < 1.0) throw ValidationError("kappa below 1");
    if (!doc.at("objective").is_null()) plan.objective = doc.at("objective").get<double>();

    const std::string crit = doc.at("criterion").get<std::string>();
    if (crit != "optimistic" && crit != "pessimistic") throw ValidationError("bad criterion " + crit);
    m.criterion = crit == "optimistic" ? Criterion::optimistic : Criterion::pessimistic;
    for (const json& c : doc.at("candidates")) {
      CandidateOutcome o;
      o.edge = edge_from(c.at("edge"));
      o.reward_before = c.at("reward_before").get<double>();
      o.reward_after = c.at("reward_after").get<double>();
      o.reference = c.at("reference").get<double>();
      o.prevented = c.at("prevented").get<bool>();
      o.capture_before = unit_interval(c.at("capture_before"), "capture_before");
      o.capture_after = unit_interval(c.at("capture_after"), "capture_after");
      m.candidates.push_back(o);
    }
    m.effectiveness = unit_interval(doc.at("effectiveness"), "effectiveness");
    m.capture_before = unit_interval(doc.at("capture_before"), "capture_before");
    m.capture_after = unit_interval(doc.at("capture_after"), "capture_after");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("plan schema error: ") + e.what());
  }
  return out;
}

}  // namespace decoygraph
