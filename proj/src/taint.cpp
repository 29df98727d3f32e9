#include "oblint/taint.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>

namespace oblint::taint {

Seeds seed_sources(const ir::Module& m, const pointsto::PointsToMap& pts) {
  Seeds out;
  auto warn = [&](ir::SourceLoc loc, std::string msg) {
    ir::Diagnostic d;
    d.severity = ir::Diagnostic::Severity::Warning;
    d.loc = loc;
    d.message = std::move(msg);
    out.diagnostics.push_back(std::move(d));
  };
  for (const auto& g : m.globals) {
    if (!g.blinded) continue;
    const auto& objs = pts.of(ir::global_key(g.name));
    if (objs.empty()) warn(g.loc, "blinded global @" + g.name + " has an empty points-to set");
    out.state.objects.insert(objs.begin(), objs.end());
  }
  for (const auto& f : m.functions) {
    for (const auto& p : f.params) {
      if (!p.blinded) continue;
      std::string key = ir::value_key(f.name, p.name);
      if (!p.type.is_ptr()) {
        out.state.values.insert(key);
        continue;
      }
      const auto& objs = pts.of(key);
      if (objs.empty())
        warn(f.loc, "blinded address parameter %" + p.name + " of '" + f.name +
                        "' has an empty points-to set");
      out.state.objects.insert(objs.begin(), objs.end());
    }
  }
  return out;
}

Propagation propagate(const vfg::ValueFlowGraph& g, const TaintState& seeds) {
  Propagation out;
  std::vector<std::optional<vfg::NodeId>> parent(g.size());
  std::vector<bool> seen(g.size(), false);
  std::deque<vfg::NodeId> queue;

  std::vector<vfg::NodeId> roots;
  auto add_root = [&](vfg::Node n) {
    auto id = g.find(n);
    if (!id) throw std::invalid_argument("taint seed " + n.str() + " is not a value-flow node");
    roots.push_back(*id);
  };
  for (const auto& v : seeds.values) add_root({vfg::Node::Kind::Value, v});
  for (const auto& o : seeds.objects) add_root({vfg::Node::Kind::Object, o});
  std::sort(roots.begin(), roots.end());
  for (auto r : roots) {
    if (seen[r]) continue;
    seen[r] = true;
    queue.push_back(r);
  }
  std::vector<vfg::NodeId> order;
  while (!queue.empty()) {
    vfg::NodeId n = queue.front();
    queue.pop_front();
    order.push_back(n);
    for (const auto& [succ, label] : g.successors(n)) {
      if (seen[succ]) continue;
      seen[succ] = true;
      parent[succ] = n;
      queue.push_back(succ);
    }
  }
  // BFS order guarantees a parent's path is built before its children's.
  for (vfg::NodeId n : order) {
    const vfg::Node& node = g.node(n);
    out.state.insert(node);
    std::vector<vfg::Node> path;
    if (parent[n]) path = out.trace.paths.at(g.node(*parent[n]));
    path.push_back(node);
    out.trace.paths.emplace(node, std::move(path));
  }
  return out;
}

std::string emit_annotated(const ir::Module& m, const TaintState& taint) {
  return ir::emit_annotated(m, taint.values);
}

}  // namespace oblint::taint
