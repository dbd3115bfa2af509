#include "decoygraph/game_core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "decoygraph/errors.hpp"
#include "json.hpp"

namespace decoygraph {

using nlohmann::json;

bool is_distribution(std::span<const double> p, double tol) {
  if (p.empty()) return false;
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -tol) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

double bilinear(const Matrix& m, std::span<const double> x, std::span<const double> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (x[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) row += m(i, j) * y[j];
    total += x[i] * row;
  }
  return total;
}

GameParams load_params(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("params parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("params document must be an object");
  GameParams p;
  auto number = [&](const char* key, double& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) throw ValidationError(std::string("param \"") + key + "\" must be a number");
    out = doc[key].get<double>();
  };
  number("cap", p.cap);
  number("esc", p.esc);
  number("honeypot_cost", p.honeypot_cost);
  number("attack_cost_per_hop", p.attack_cost_per_hop);
  if (doc.contains("budget")) {
    if (!doc["budget"].is_number_integer())
      throw ValidationError("param \"budget\" must be an integer");
    p.budget = doc["budget"].get<int>();
  }
  if (doc.contains("terminate_on_capture")) {
    if (!doc["terminate_on_capture"].is_boolean())
      throw ValidationError("param \"terminate_on_capture\" must be a boolean");
    p.terminate_on_capture = doc["terminate_on_capture"].get<bool>();
  }
  for (double v : {p.cap, p.esc, p.honeypot_cost, p.attack_cost_per_hop}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("params must be finite and nonnegative");
  }
  if (p.budget < 0) throw ValidationError("budget must be nonnegative");
  return p;
}

GameParams load_params_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open params file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load_params(buf.str());
}

std::string params_to_json(const GameParams& p) {
  json doc = {{"cap", p.cap},
              {"esc", p.esc},
              {"honeypot_cost", p.honeypot_cost},
              {"attack_cost_per_hop", p.attack_cost_per_hop},
              {"budget", p.budget},
              {"terminate_on_capture", p.terminate_on_capture}};
  return doc.dump();
}

void validate_params(const GameParams& p, const AttackGraph& g) {
  for (double v : {p.cap, p.esc, p.honeypot_cost, p.attack_cost_per_hop}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("params must be finite and nonnegative");
  }
  if (p.budget < 0) throw ValidationError("budget must be nonnegative");
  if (static_cast<std::size_t>(p.budget) > g.edge_count())
    throw ValidationError("budget " + std::to_string(p.budget) + " exceeds edge count " +
                          std::to_string(g.edge_count()));
}

bool DefenderAction::contains(EdgeId e) const { return std::ranges::binary_search(edges, e); }

std::string to_string(const DefenderAction& a, const AttackGraph& g) {
  std::string s = "{";
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    if (i) s += ",";
    s += to_string(g.edge(a.edges[i]));
  }
  return s + "}";
}

std::vector<DefenderAction> defender_actions(const AttackGraph& g, const GameParams& p,
                                             std::size_t cap) {
  validate_params(p, g);
  const std::size_t n = g.edge_count();
  const std::size_t h = static_cast<std::size_t>(p.budget);
  std::vector<DefenderAction> actions;
  std::vector<EdgeId> combo;
  for (std::size_t k = 0; k <= h; ++k) {
    combo.resize(k);
    std::iota(combo.begin(), combo.end(), EdgeId{0});
    while (true) {
      if (actions.size() >= cap)
        throw OverflowError("defender action count exceeds cap of " + std::to_string(cap));
      actions.push_back({combo});
      // Next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && combo[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++combo[i - 1];
      for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return actions;
}

namespace {

template <typename Captured>
double evaluate_profile(const AttackGraph& g, const GameParams& p, const AttackPath& attack,
                        std::size_t honeypots, Captured&& captured) {
  double nodes = 0.0;
  for (std::size_t k = 0; k < attack.edges.size(); ++k) {
    const double v = g.value(attack.nodes[k + 1]);
    if (captured(attack.edges[k])) {
      nodes += p.cap * v;
      if (p.terminate_on_capture) break;
    } else {
      nodes -= p.esc * v;
    }
  }
  return nodes - p.honeypot_cost * static_cast<double>(honeypots) +
         p.attack_cost_per_hop * static_cast<double>(attack.hops());
}

}  // namespace

double reward(const AttackGraph& g, const GameParams& p, const DefenderAction& defender,
              const AttackPath& attack) {
  return evaluate_profile(g, p, attack, defender.size(),
                          [&](EdgeId e) { return defender.contains(e); });
}

double mitigated_reward(const AttackGraph& g, const GameParams& p,
                        const DefenderAction& defender, const AttackPath& attack,
                        const PinnedHoneypots& pins) {
  std::vector<EdgeId> pinned;
  for (const Edge& e : pins.edges)
    if (auto id = g.find_edge(e)) pinned.push_back(*id);
  return evaluate_profile(g, p, attack, defender.size() + pins.edges.size(), [&](EdgeId e) {
    return defender.contains(e) || std::ranges::find(pinned, e) != pinned.end();
  });
}

Matrix payoff_matrix(const AttackGraph& g, const GameParams& p,
                     std::span<const DefenderAction> defender,
                     std::span<const AttackPath> attacks, const PinnedHoneypots& pins,
                     Execution exec) {
  Matrix m(defender.size(), attacks.size());
  const long rows = static_cast<long>(defender.size());
  auto fill_row = [&](long i) {
    for (std::size_t j = 0; j < attacks.size(); ++j) {
      m(i, j) = pins.empty() ? reward(g, p, defender[i], attacks[j])
                             : mitigated_reward(g, p, defender[i], attacks[j], pins);
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) fill_row(i);
  } else {
    for (long i = 0; i < rows; ++i) fill_row(i);
  }
  return m;
}

GameInstance build_matrix(const AttackGraph& g, const GameParams& p, const GameOptions& options,
                          Execution exec) {
  std::vector<DefenderAction> actions = defender_actions(g, p, options.action_cap);
  std::vector<AttackPath> paths = enumerate_attack_paths(g, options.paths);
  if (paths.empty()) throw ValidationError("no attack path from the enabled entry nodes");
  Matrix m = payoff_matrix(g, p, actions, paths, {}, exec);
  return GameInstance{g, p, options, std::move(actions), std::move(paths), std::move(m)};
}

std::vector<std::size_t> align_actions(const GameInstance& game1, const GameInstance& game2) {
  std::map<std::vector<Edge>, std::size_t> where;
  for (std::size_t i = 0; i < game2.defender_actions.size(); ++i) {
    std::vector<Edge> key;
    for (EdgeId e : game2.defender_actions[i].edges) key.push_back(game2.graph.edge(e));
    std::ranges::sort(key);
    where.emplace(std::move(key), i);
  }
  std::vector<std::size_t> out;
  out.reserve(game1.defender_actions.size());
  for (const DefenderAction& a : game1.defender_actions) {
    std::vector<Edge> key;
    for (EdgeId e : a.edges) key.push_back(game1.graph.edge(e));
    std::ranges::sort(key);
    auto it = where.find(key);
    if (it == where.end())
      throw ValidationError("defender action " + to_string(a, game1.graph) +
                            " has no counterpart in the augmented game");
    out.push_back(it->second);
  }
  return out;
}

MixedStrategy pad_strategy(std::span<const double> x1, const GameInstance& game1,
                           const GameInstance& game2) {
  if (x1.size() != game1.defender_actions.size())
    throw ValidationError("strategy length does not match game-1 defender actions");
  std::vector<std::size_t> at = align_actions(game1, game2);
  MixedStrategy padded(game2.defender_actions.size(), 0.0);
  for (std::size_t i = 0; i < at.size(); ++i) padded[at[i]] = x1[i];
  return padded;
}

}  // namespace decoygraph
