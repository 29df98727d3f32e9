#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oblint/ir.hpp"
#include "oblint/pointsto.hpp"

namespace oblint::vfg {

struct Node {
  enum class Kind { Value, Object };
  Kind kind = Kind::Value;
  /// Value: ir::value_key / ir::global_key. Object: abstract site id.
  std::string key;

  std::string str() const;
  friend auto operator<=>(const Node&, const Node&) = default;
};

enum class EdgeLabel { Data, MemoryWrite, MemoryRead, SelectCond, CallArg, CallRet, AddrIndex };

std::string_view label_name(EdgeLabel l);

using NodeId = std::size_t;

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  EdgeLabel label = EdgeLabel::Data;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ValueFlowGraph {
 public:
  NodeId add_node(Node n);
  /// Adds the edge if not already present. Both endpoints must exist.
  void add_edge(NodeId from, NodeId to, EdgeLabel label);

  std::optional<NodeId> find(const Node& n) const;
  std::optional<NodeId> find_value(const std::string& key) const {
    return find(Node{Node::Kind::Value, key});
  }
  std::optional<NodeId> find_object(const std::string& key) const {
    return find(Node{Node::Kind::Object, key});
  }

  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  /// Successors in ascending node order, each with the edge label.
  const std::vector<std::pair<NodeId, EdgeLabel>>& successors(NodeId id) const {
    return succ_.at(id);
  }
  bool has_edge(NodeId from, NodeId to, EdgeLabel label) const {
    return edges_.count(Edge{from, to, label}) > 0;
  }

 private:
  std::vector<Node> nodes_;
  std::map<Node, NodeId> index_;
  std::set<Edge> edges_;
  std::vector<std::vector<std::pair<NodeId, EdgeLabel>>> succ_;
};

ValueFlowGraph build(const ir::Module& m, const pointsto::PointsToMap& pts);

/// Forward-reachable nodes from `sources` (inclusive), breadth-first.
std::set<NodeId> reachable(const ValueFlowGraph& g, const std::set<NodeId>& sources);

std::string to_dot(const ValueFlowGraph& g);

}  // namespace oblint::vfg
