#include "decoygraph/attack_graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "decoygraph/errors.hpp"
#include "json.hpp"

namespace decoygraph {

using nlohmann::json;

std::string to_string(const Edge& e) {
  return "(" + std::to_string(e.from) + "," + std::to_string(e.to) + ")";
}

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::entry:
      return "entry";
    case NodeRole::intermediate:
      return "intermediate";
    case NodeRole::target:
      return "target";
  }
  return "intermediate";
}

std::string_view to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::analyzed:
      return "analyzed";
    case CandidateStatus::excluded:
      return "excluded";
    case CandidateStatus::dominant:
      return "dominant";
  }
  return "analyzed";
}

namespace {

// Forward reachability from `sources`; targets are terminal and not expanded.
std::vector<bool> reachable_from(const AttackGraph& g,
                                 const std::vector<std::size_t>& sources,
                                 const std::unordered_map<NodeId, std::size_t>& index) {
  std::vector<bool> seen(g.node_count(), false);
  std::deque<std::size_t> queue;
  for (std::size_t s : sources) {
    seen[s] = true;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    std::size_t at = queue.front();
    queue.pop_front();
    const NodeRecord& rec = g.nodes()[at];
    if (rec.role == NodeRole::target) continue;
    for (EdgeId e : g.out_edges(rec.id)) {
      std::size_t next = index.at(g.edge(e).to);
      if (!seen[next]) {
        seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  return seen;
}

}  // namespace

AttackGraph::AttackGraph(std::vector<NodeRecord> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const NodeRecord& n = nodes_[i];
    if (n.id < 0) throw ValidationError("negative node id " + std::to_string(n.id));
    if (!index_.emplace(n.id, i).second)
      throw ValidationError("duplicate node id " + std::to_string(n.id));
    if (!(n.value >= 0.0))
      throw ValidationError("node " + std::to_string(n.id) + " has negative or invalid value");
    if (n.role == NodeRole::entry) entries_.push_back(n.id);
    if (n.role == NodeRole::target) targets_.push_back(n.id);
  }
  std::ranges::sort(entries_);
  std::ranges::sort(targets_);

  out_.resize(nodes_.size());
  std::set<Edge> seen;
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    for (NodeId end : {e.from, e.to}) {
      if (!index_.contains(end))
        throw ValidationError("unknown endpoint " + std::to_string(end) + " in edge " +
                              to_string(e));
    }
    if (e.from == e.to) throw ValidationError("self-loop on node " + std::to_string(e.from));
    if (!seen.insert(e).second) throw ValidationError("duplicate edge " + to_string(e));
    out_[index_.at(e.from)].push_back(id);
  }
  for (auto& list : out_) {
    std::ranges::sort(list, [this](EdgeId a, EdgeId b) { return edges_[a].to < edges_[b].to; });
  }

  if (entries_.empty()) throw ValidationError("no entry nodes");
  if (targets_.empty()) throw ValidationError("no target nodes");

  std::vector<std::size_t> sources;
  for (NodeId id : entries_) sources.push_back(index_.at(id));
  std::vector<bool> seen_nodes = reachable_from(*this, sources, index_);
  bool any = std::ranges::any_of(targets_, [&](NodeId t) { return seen_nodes[index_.at(t)]; });
  if (!any) throw ValidationError("no path from any entry node to any target node");
}

std::size_t AttackGraph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown node " + std::to_string(id));
  return it->second;
}

const NodeRecord& AttackGraph::node(NodeId id) const { return nodes_[index_of(id)]; }

std::optional<EdgeId> AttackGraph::find_edge(const Edge& e) const {
  auto it = index_.find(e.from);
  if (it == index_.end()) return std::nullopt;
  for (EdgeId id : out_[it->second])
    if (edges_[id].to == e.to) return id;
  return std::nullopt;
}

std::span<const EdgeId> AttackGraph::out_edges(NodeId id) const { return out_[index_of(id)]; }

AttackGraph AttackGraph::with_scaled_values(std::span<const NodeId> ids, double factor) const {
  std::vector<NodeRecord> nodes = nodes_;
  for (NodeId id : ids) nodes[index_of(id)].value *= factor;
  return AttackGraph(std::move(nodes), edges_);
}

AttackGraph load_graph(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("graph parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
    throw ValidationError("graph document needs a \"nodes\" array");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw ValidationError("graph document needs an \"edges\" array");

  std::vector<NodeRecord> nodes;
  for (const json& n : doc["nodes"]) {
    if (!n.is_object() || !n.contains("id") || !n["id"].is_number_integer())
      throw ValidationError("node entry without integer \"id\": " + n.dump());
    NodeRecord rec;
    rec.id = n["id"].get<NodeId>();
    if (n.contains("value")) {
      if (!n["value"].is_number())
        throw ValidationError("node " + std::to_string(rec.id) + " has non-numeric value");
      rec.value = n["value"].get<double>();
    }
    std::string role = n.value("role", std::string("intermediate"));
    if (role == "entry") {
      rec.role = NodeRole::entry;
    } else if (role == "target") {
      rec.role = NodeRole::target;
    } else if (role == "intermediate") {
      rec.role = NodeRole::intermediate;
    } else {
      throw ValidationError("node " + std::to_string(rec.id) + " has unknown role \"" + role +
                            "\"");
    }
    nodes.push_back(rec);
  }

  std::vector<Edge> edges;
  for (const json& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw ValidationError("edge must be a pair of node ids: " + e.dump());
    edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>()});
  }
  return AttackGraph(std::move(nodes), std::move(edges));
}

AttackGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

std::string graph_to_json(const AttackGraph& g) {
  json doc;
  doc["nodes"] = json::array();
  for (const NodeRecord& n : g.nodes())
    doc["nodes"].push_back({{"id", n.id}, {"value", n.value}, {"role", to_string(n.role)}});
  doc["edges"] = json::array();
  for (const Edge& e : g.edges()) doc["edges"].push_back({e.from, e.to});
  return doc.dump();
}

bool AttackPath::uses(EdgeId e) const { return std::ranges::find(edges, e) != edges.end(); }

std::string to_string(const AttackPath& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p.nodes[i]);
  }
  return s + "]";
}

namespace {

class PathWalker {
 public:
  PathWalker(const AttackGraph& g, const PathOptions& options, std::vector<AttackPath>& out)
      : g_(g), options_(options), out_(out) {}

  void walk_from(NodeId entry) {
    current_.nodes = {entry};
    current_.edges.clear();
    on_path_ = {entry};
    extend(entry);
  }

 private:
  void extend(NodeId at) {
    if (at != current_.nodes.front() && g_.is_target(at)) {
      if (out_.size() >= options_.cap)
        throw OverflowError("attack path count exceeds cap of " + std::to_string(options_.cap));
      out_.push_back(current_);
      return;
    }
    if (options_.max_hops && current_.edges.size() >= *options_.max_hops) return;
    for (EdgeId e : g_.out_edges(at)) {
      NodeId next = g_.edge(e).to;
      if (on_path_.contains(next)) continue;
      on_path_.insert(next);
      current_.nodes.push_back(next);
      current_.edges.push_back(e);
      extend(next);
      current_.edges.pop_back();
      current_.nodes.pop_back();
      on_path_.erase(next);
    }
  }

  const AttackGraph& g_;
  const PathOptions& options_;
  std::vector<AttackPath>& out_;
  AttackPath current_;
  std::set<NodeId> on_path_;
};

}  // namespace

std::vector<AttackPath> enumerate_attack_paths(const AttackGraph& g, const PathOptions& options) {
  std::vector<NodeId> starts = g.entries();
  if (options.enabled_entries) {
    starts = *options.enabled_entries;
    std::ranges::sort(starts);
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    if (starts.empty()) throw ValidationError("invalid entry subset: empty");
    for (NodeId id : starts) {
      if (!g.has_node(id) || !g.is_entry(id))
        throw ValidationError("invalid entry subset: node " + std::to_string(id) +
                              " is not an entry node");
    }
  }

  std::vector<AttackPath> paths;
  PathWalker walker(g, options, paths);
  for (NodeId entry : starts) walker.walk_from(entry);

  std::ranges::stable_sort(paths, [](const AttackPath& a, const AttackPath& b) {
    if (a.entry() != b.entry()) return a.entry() < b.entry();
    if (a.target() != b.target()) return a.target() < b.target();
    return a.nodes < b.nodes;
  });
  return paths;
}

std::vector<ZeroDayCandidate> generate_zero_day_candidates(const AttackGraph& g) {
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < g.node_count(); ++i) index[g.nodes()[i].id] = i;

  std::vector<std::size_t> sources;
  for (NodeId id : g.entries()) sources.push_back(index.at(id));
  std::vector<bool> from_entry = reachable_from(g, sources, index);

  // Nodes that can still reach a target, walking backwards through
  // non-target predecessors only.
  std::vector<std::vector<std::size_t>> preds(g.node_count());
  for (const Edge& e : g.edges()) preds[index.at(e.to)].push_back(index.at(e.from));
  std::vector<bool> to_target(g.node_count(), false);
  std::deque<std::size_t> queue;
  for (NodeId t : g.targets()) {
    to_target[index.at(t)] = true;
    queue.push_back(index.at(t));
  }
  while (!queue.empty()) {
    std::size_t at = queue.front();
    queue.pop_front();
    for (std::size_t p : preds[at]) {
      if (to_target[p] || g.nodes()[p].role == NodeRole::target) continue;
      to_target[p] = true;
      queue.push_back(p);
    }
  }

  std::vector<NodeId> ids;
  for (const NodeRecord& n : g.nodes()) ids.push_back(n.id);
  std::ranges::sort(ids);

  std::vector<ZeroDayCandidate> out;
  for (NodeId u : ids) {
    for (NodeId v : ids) {
      if (u == v || g.find_edge({u, v})) continue;
      ZeroDayCandidate c{{u, v}, CandidateStatus::analyzed, ""};
      if (g.is_target(u) || (!g.is_target(v) && !to_target[index.at(v)])) {
        c.status = CandidateStatus::excluded;
        c.reason = "dead-end";
      } else if (!from_entry[index.at(u)]) {
        c.status = CandidateStatus::excluded;
        c.reason = "source unreachable";
      } else if (g.is_entry(u) && g.is_target(v)) {
        c.status = CandidateStatus::dominant;
        c.reason = "entry-to-target";
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

AttackGraph augment(const AttackGraph& g, const Edge& e) {
  if (!g.has_node(e.from) || !g.has_node(e.to))
    throw ValidationError("unknown endpoint in edge " + to_string(e));
  if (g.find_edge(e)) throw ValidationError("edge already present: " + to_string(e));
  std::vector<NodeRecord> nodes(g.nodes().begin(), g.nodes().end());
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  edges.push_back(e);
  return AttackGraph(std::move(nodes), std::move(edges));
}

}  // namespace decoygraph
