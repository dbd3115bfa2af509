#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace decoygraph {

using NodeId = int;
using EdgeId = std::size_t;

enum class NodeRole { entry, intermediate, target };

struct NodeRecord {
  NodeId id = 0;
  double value = 0.0;
  NodeRole role = NodeRole::intermediate;
};

/// Directed exploit edge: an attacker holding `from` can reach `to`.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;

  auto operator<=>(const Edge&) const = default;
};

std::string to_string(const Edge& e);
std::string_view to_string(NodeRole role);

/// Attack graph with valued nodes and entry/target roles.
///
/// The constructor validates every invariant and throws ValidationError with a
/// message naming the offending element. Edge ids are positions in the edge
/// list and are stable under augment().
class AttackGraph {
 public:
  AttackGraph(std::vector<NodeRecord> nodes, std::vector<Edge> edges);

  std::span<const NodeRecord> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Edge& edge(EdgeId id) const { return edges_.at(id); }

  bool has_node(NodeId id) const { return index_.contains(id); }
  const NodeRecord& node(NodeId id) const;
  double value(NodeId id) const { return node(id).value; }
  bool is_entry(NodeId id) const { return node(id).role == NodeRole::entry; }
  bool is_target(NodeId id) const { return node(id).role == NodeRole::target; }

  /// Sorted ascending.
  const std::vector<NodeId>& entries() const { return entries_; }
  const std::vector<NodeId>& targets() const { return targets_; }

  std::optional<EdgeId> find_edge(const Edge& e) const;
  /// Outgoing edge ids of `id`, ordered by head node id.
  std::span<const EdgeId> out_edges(NodeId id) const;

  /// Copy with v(i) multiplied by `factor` for each listed node.
  AttackGraph with_scaled_values(std::span<const NodeId> ids, double factor) const;

 private:
  std::size_t index_of(NodeId id) const;

  std::vector<NodeRecord> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<NodeId> entries_;
  std::vector<NodeId> targets_;
};

/// Parses and validates a graph document:
/// {"nodes":[{"id":1,"value":0.0,"role":"entry"},...],"edges":[[1,2],...]}
AttackGraph load_graph(std::string_view document);
AttackGraph load_graph_file(const std::filesystem::path& path);
std::string graph_to_json(const AttackGraph& g);

/// A simple directed path from an entry node to a target node. Targets are
/// terminal: a path ends at the first target it reaches.
struct AttackPath {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;

  std::size_t hops() const { return edges.size(); }
  bool uses(EdgeId e) const;
  NodeId entry() const { return nodes.front(); }
  NodeId target() const { return nodes.back(); }

  bool operator==(const AttackPath&) const = default;
};

std::string to_string(const AttackPath& p);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

struct PathOptions {
  std::optional<std::size_t> max_hops;
  std::size_t cap = kDefaultEnumerationCap;
  /// Restricts which entry nodes may start a path. Unset means all entries.
  std::optional<std::vector<NodeId>> enabled_entries;
};

/// Every simple entry→target path, sorted by (entry, target, node sequence).
/// Throws OverflowError if more than `options.cap` paths exist.
std::vector<AttackPath> enumerate_attack_paths(const AttackGraph& g,
                                               const PathOptions& options = {});

enum class CandidateStatus { analyzed, excluded, dominant };
std::string_view to_string(CandidateStatus s);

struct ZeroDayCandidate {
  Edge edge;
  CandidateStatus status = CandidateStatus::analyzed;
  std::string reason;
};

/// Classifies every ordered non-edge (u,v), u≠v, ordered by (u,v):
///   excluded "dead-end"           u is a target, or v ∉ T cannot reach a target
///   excluded "source unreachable" no entry reaches u
///   dominant                      u ∈ E and v ∈ T
///   analyzed                      otherwise
std::vector<ZeroDayCandidate> generate_zero_day_candidates(const AttackGraph& g);

/// G₂ = G₁ + {e}; the new edge gets id edge_count().
AttackGraph augment(const AttackGraph& g, const Edge& e);

}  // namespace decoygraph
