#pragma once

#include <random>
#include <string>

#include "decoygraph/attack_graph.hpp"
#include "decoygraph/game_core.hpp"
#include "json.hpp"

namespace fixtures {

inline const std::string kData = DECOYGRAPH_DATA_DIR;

inline constexpr const char* kLine = R"({"nodes":[
  {"id":1,"value":0,"role":"entry"},
  {"id":2,"value":1,"role":"intermediate"},
  {"id":3,"value":2,"role":"target"}],
  "edges":[[1,2],[2,3]]})";

inline decoygraph::GameParams line_params() {
  decoygraph::GameParams p;
  p.cap = 10;
  p.esc = 5;
  p.honeypot_cost = 1;
  p.attack_cost_per_hop = 1;
  p.budget = 1;
  return p;
}

inline decoygraph::AttackGraph line() { return decoygraph::load_graph(kLine); }

/// Random DAG-free digraph on n nodes: node 0 entry, node n-1 target, plus a
/// guaranteed 0→…→n-1 chain so the graph is always valid.
inline std::string random_graph(std::mt19937_64& rng, int n, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  nlohmann::json doc;
  for (int i = 0; i < n; ++i) {
    std::string role = i == 0 ? "entry" : i == n - 1 ? "target" : "intermediate";
    if (i == 1 && u(rng) < 0.5) role = "entry";
    if (i == n - 2 && n > 3 && u(rng) < 0.5) role = "target";
    doc["nodes"].push_back({{"id", i}, {"value", std::floor(u(rng) * 6.0)}, {"role", role}});
  }
  for (int i = 0; i + 1 < n; ++i) doc["edges"].push_back({i, i + 1});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && b != a + 1 && u(rng) < density) doc["edges"].push_back({a, b});
  return doc.dump();
}

}  // namespace fixtures
