#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oblint/ir.hpp"
#include "oblint/pointsto.hpp"
#include "oblint/vfg.hpp"

namespace oblint::taint {

/// Tainted SSA definitions (value keys) and tainted abstract objects (site ids).
struct TaintState {
  std::set<std::string> values;
  std::set<std::string> objects;

  bool empty() const { return values.empty() && objects.empty(); }
  bool value_tainted(const std::string& key) const { return values.count(key) > 0; }
  bool object_tainted(const std::string& id) const { return objects.count(id) > 0; }
  bool contains(const vfg::Node& n) const {
    return n.kind == vfg::Node::Kind::Value ? value_tainted(n.key) : object_tainted(n.key);
  }
  void insert(const vfg::Node& n) {
    (n.kind == vfg::Node::Kind::Value ? values : objects).insert(n.key);
  }

  friend bool operator==(const TaintState&, const TaintState&) = default;
};

/// For each tainted node, one shortest path from a seed (seed first).
struct TaintTrace {
  std::map<vfg::Node, std::vector<vfg::Node>> paths;

  const std::vector<vfg::Node>* path_to(const vfg::Node& n) const {
    auto it = paths.find(n);
    return it == paths.end() ? nullptr : &it->second;
  }
};

struct Seeds {
  TaintState state;
  std::vector<ir::Diagnostic> diagnostics;
};

/// Blinded scalar parameters seed their value; blinded pointer parameters
/// seed every object they may point to; a blinded global seeds its storage.
Seeds seed_sources(const ir::Module& m, const pointsto::PointsToMap& pts);

struct Propagation {
  TaintState state;
  TaintTrace trace;
};

/// Breadth-first closure of `seeds` over the graph. Throws
/// std::invalid_argument when a seed is not a graph node.
Propagation propagate(const vfg::ValueFlowGraph& g, const TaintState& seeds);

std::string emit_annotated(const ir::Module& m, const TaintState& taint);

}  // namespace oblint::taint
