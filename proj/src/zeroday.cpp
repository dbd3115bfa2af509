#include "decoygraph/zeroday.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>

#include "decoygraph/errors.hpp"
#include "decoygraph/format.hpp"
#include "json.hpp"

namespace decoygraph {

using nlohmann::json;

std::string_view to_string(Criterion c) {
  return c == Criterion::optimistic ? "optimistic" : "pessimistic";
}

std::string_view to_string(PessimisticAttacker p) {
  return p == PessimisticAttacker::best_response ? "best_response" : "restricted_equilibrium";
}

std::string_view to_string(DominanceClass d) {
  switch (d) {
    case DominanceClass::dominant:
      return "dominant";
    case DominanceClass::dominated:
      return "dominated";
    case DominanceClass::neither:
      return "neither";
    case DominanceClass::no_new_path:
      return "no_new_path";
  }
  return "neither";
}

namespace {

constexpr double kStrictTol = 1e-9;

// Attacker payoff of every column against the row mixture `x`.
std::vector<double> attacker_column_rewards(const Matrix& r, std::span<const double> x) {
  std::vector<double> out(r.cols(), 0.0);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    if (x[i] == 0.0) continue;
    for (std::size_t j = 0; j < r.cols(); ++j) out[j] -= x[i] * r(i, j);
  }
  return out;
}

DominanceClass classify(const AugmentedGame& ag, std::span<const double> y1) {
  if (ag.new_paths.empty()) return DominanceClass::no_new_path;
  std::vector<double> u = attacker_column_rewards(ag.game.payoff, ag.padded_base);

  std::size_t best_new = ag.new_paths.front();
  for (std::size_t j : ag.new_paths)
    if (u[j] > u[best_new]) best_new = j;
  const double u_new = u[best_new];

  // Old columns keep their game-1 relative order.
  std::vector<std::size_t> old_cols;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (!std::ranges::binary_search(ag.new_paths, j)) old_cols.push_back(j);

  bool dominant = std::ranges::all_of(old_cols, [&](std::size_t j) { return u_new > u[j] + kStrictTol; });
  if (dominant) return DominanceClass::dominant;

  bool below_support = true;
  double against_y1 = 0.0;
  for (std::size_t k = 0; k < old_cols.size() && k < y1.size(); ++k) {
    against_y1 += y1[k] * u[old_cols[k]];
    if (y1[k] > 1e-12 && !(u_new < u[old_cols[k]] - kStrictTol)) below_support = false;
  }
  if (below_support && u_new < against_y1 - kStrictTol) return DominanceClass::dominated;
  return DominanceClass::neither;
}

}  // namespace

AugmentedGame augmented_game(const GameInstance& game1, std::span<const double> base,
                             const Edge& e, Execution exec) {
  AttackGraph g2 = augment(game1.graph, e);
  GameInstance game2 = build_matrix(g2, game1.params, game1.options, exec);
  AugmentedGame ag{std::move(game2), {}, {}, {}, game1.graph.edge_count()};
  ag.game1_rows = align_actions(game1, ag.game);
  ag.padded_base.assign(ag.game.defender_actions.size(), 0.0);
  for (std::size_t i = 0; i < ag.game1_rows.size(); ++i) ag.padded_base[ag.game1_rows[i]] = base[i];
  for (std::size_t j = 0; j < ag.game.attack_paths.size(); ++j)
    if (ag.game.attack_paths[j].uses(ag.zero_day)) ag.new_paths.push_back(j);
  return ag;
}

ZeroDayRow evaluate_candidate(const GameInstance& game1, const GameSolution& sol1,
                              const Edge& e, const ScanOptions& options) {
  ZeroDayRow row;
  row.edge = e;
  row.status = game1.graph.is_entry(e.from) && game1.graph.is_target(e.to)
                   ? CandidateStatus::dominant
                   : CandidateStatus::analyzed;
  row.naive = -sol1.value;

  AugmentedGame ag = augmented_game(game1, sol1.defender_strategy, e);
  row.new_path_count = ag.new_paths.size();
  if (ag.new_paths.empty()) {
    row.optimistic = row.pessimistic = row.naive;
    row.dominance = DominanceClass::no_new_path;
    return row;
  }

  const Matrix& r2 = ag.game.payoff;
  const std::size_t cols = r2.cols();

  std::vector<double> y_pes(cols, 0.0);
  if (options.pessimistic_attacker == PessimisticAttacker::best_response) {
    BestResponse br = best_response(r2, ag.padded_base, Responder::column);
    y_pes[br.index] = 1.0;
    row.pessimistic = br.value;
  } else {
    Matrix restricted(ag.game1_rows.size(), cols);
    for (std::size_t i = 0; i < ag.game1_rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) restricted(i, j) = r2(ag.game1_rows[i], j);
    y_pes = solve_zero_sum(restricted).attacker_strategy;
    row.pessimistic = -bilinear(r2, ag.padded_base, y_pes);
  }

  GameSolution sol2 = solve_zero_sum(r2);
  row.optimistic = -bilinear(r2, ag.padded_base, sol2.attacker_strategy);

  const std::vector<double>& y =
      options.criterion == Criterion::optimistic ? sol2.attacker_strategy : y_pes;
  for (std::size_t j : ag.new_paths) row.exploit_probability += y[j];
  row.exploit_probability = std::clamp(row.exploit_probability, 0.0, 1.0);

  const double selected =
      options.criterion == Criterion::optimistic ? row.optimistic : row.pessimistic;
  row.impact = selected - row.naive;
  row.dominance = classify(ag, sol1.attacker_strategy);
  return row;
}

ZeroDayReport scan_candidates(const GameInstance& game1, const GameSolution& sol1,
                              std::span<const ZeroDayCandidate> candidates,
                              const ScanOptions& options, Execution exec) {
  std::vector<Edge> work;
  for (const ZeroDayCandidate& c : candidates)
    if (c.status != CandidateStatus::excluded) work.push_back(c.edge);

  ZeroDayReport report{options, std::vector<ZeroDayRow>(work.size())};
  const long n = static_cast<long>(work.size());
  if (exec == Execution::serial) {
    for (long k = 0; k < n; ++k) report.rows[k] = evaluate_candidate(game1, sol1, work[k], options);
    return report;
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    try {
      report.rows[k] = evaluate_candidate(game1, sol1, work[k], options);
    } catch (...) {
#pragma omp critical(decoygraph_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

void rank_candidates(std::vector<ZeroDayRow>& rows) {
  // Impacts equal to 1e-9 are treated as ties.
  auto key = [](double impact) { return std::round(impact * 1e9); };
  std::ranges::stable_sort(rows, [&](const ZeroDayRow& a, const ZeroDayRow& b) {
    const double ka = key(a.impact);
    const double kb = key(b.impact);
    if (ka != kb) return ka > kb;
    return a.edge < b.edge;
  });
}

DominanceClass check_dominance(const GameInstance& game1, std::span<const double> x,
                               std::span<const double> y1, const Edge& e) {
  AugmentedGame ag = augmented_game(game1, x, e);
  return classify(ag, y1);
}

void write_report_csv(const ZeroDayReport& report, std::ostream& out) {
  out << "edge_u,edge_v,naive,optimistic,pessimistic,impact,y_e,dominance\n";
  for (const ZeroDayRow& r : report.rows) {
    out << r.edge.from << ',' << r.edge.to << ',' << fixed6(r.naive) << ','
        << fixed6(r.optimistic) << ',' << fixed6(r.pessimistic) << ',' << fixed6(r.impact) << ','
        << fixed6(r.exploit_probability) << ',' << to_string(r.dominance) << '\n';
  }
}

std::string report_to_json(const ZeroDayReport& report) {
  json doc;
  doc["criterion"] = to_string(report.options.criterion);
  doc["pessimistic_attacker"] = to_string(report.options.pessimistic_attacker);
  doc["rows"] = json::array();
  for (const ZeroDayRow& r : report.rows) {
    doc["rows"].push_back({{"edge", {r.edge.from, r.edge.to}},
                           {"status", to_string(r.status)},
                           {"naive", round6(r.naive)},
                           {"optimistic", round6(r.optimistic)},
                           {"pessimistic", round6(r.pessimistic)},
                           {"impact", round6(r.impact)},
                           {"new_path_count", r.new_path_count},
                           {"y_e", round6(r.exploit_probability)},
                           {"dominance", to_string(r.dominance)}});
  }
  return doc.dump(2);
}

ZeroDayReport report_from_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("report parse error: ") + e.what());
  }
  ZeroDayReport report;
  try {
    const std::string crit = doc.at("criterion").get<std::string>();
    if (crit != "optimistic" && crit != "pessimistic") throw ValidationError("bad criterion " + crit);
    report.options.criterion = crit == "optimistic" ? Criterion::optimistic : Criterion::pessimistic;
    const std::string pa = doc.at("pessimistic_attacker").get<std::string>();
    if (pa != "best_response" && pa != "restricted_equilibrium")
      throw ValidationError("bad pessimistic_attacker " + pa);
    report.options.pessimistic_attacker = pa == "best_response"
                                              ? PessimisticAttacker::best_response
                                              : PessimisticAttacker::restricted_equilibrium;
    for (const json& r : doc.at("rows")) {
      ZeroDayRow row;
      row.edge = {r.at("edge").at(0).get<NodeId>(), r.at("edge").at(1).get<NodeId>()};
      const std::string status = r.at("status").get<std::string>();
      if (status == "dominant") {
        row.status = CandidateStatus::dominant;
      } else if (status == "analyzed") {
        row.status = CandidateStatus::analyzed;
      } else {
        throw ValidationError("bad row status " + status);
      }
      row.naive = r.at("naive").get<double>();
      row.optimistic = r.at("optimistic").get<double>();
      row.pessimistic = r.at("pessimistic").get<double>();
      row.impact = r.at("impact").get<double>();
      row.new_path_count = r.at("new_path_count").get<std::size_t>();
      row.exploit_probability = r.at("y_e").get<double>();
      if (row.exploit_probability < 0.0 || row.exploit_probability > 1.0)
        throw ValidationError("y_e outside [0,1]");
      const std::string dom = r.at("dominance").get<std::string>();
      if (dom == "dominant") {
        row.dominance = DominanceClass::dominant;
      } else if (dom == "dominated") {
        row.dominance = DominanceClass::dominated;
      } else if (dom == "neither") {
        row.dominance = DominanceClass::neither;
      } else if (dom == "no_new_path") {
        row.dominance = DominanceClass::no_new_path;
      } else {
        throw ValidationError("bad dominance " + dom);
      }
      report.rows.push_back(row);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report schema error: ") + e.what());
  }
  return report;
}

}  // namespace decoygraph
