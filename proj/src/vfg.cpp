#include "oblint/vfg.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace oblint::vfg {

std::string Node::str() const { return kind == Kind::Value ? key : "obj(" + key + ")"; }

std::string_view label_name(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::Data: return "data";
    case EdgeLabel::MemoryWrite: return "memory-write";
    case EdgeLabel::MemoryRead: return "memory-read";
    case EdgeLabel::SelectCond: return "select-cond";
    case EdgeLabel::CallArg: return "call-arg";
    case EdgeLabel::CallRet: return "call-ret";
    case EdgeLabel::AddrIndex: return "addr-index";
  }
  return "?";
}

NodeId ValueFlowGraph::add_node(Node n) {
  auto [it, fresh] = index_.emplace(n, nodes_.size());
  if (fresh) {
    nodes_.push_back(std::move(n));
    succ_.emplace_back();
  }
  return it->second;
}

void ValueFlowGraph::add_edge(NodeId from, NodeId to, EdgeLabel label) {
  if (from >= nodes_.size() || to >= nodes_.size())
    throw std::out_of_range("value-flow edge endpoint is not a node");
  if (!edges_.insert(Edge{from, to, label}).second) return;
  auto& s = succ_[from];
  auto entry = std::make_pair(to, label);
  s.insert(std::upper_bound(s.begin(), s.end(), entry), entry);
}

std::optional<NodeId> ValueFlowGraph::find(const Node& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

class Builder {
 public:
  Builder(const ir::Module& m, const pointsto::PointsToMap& pts) : m_(m), pts_(pts) {}

  ValueFlowGraph run() {
    for (const auto& gl : m_.globals) value(ir::global_key(gl.name));
    for (const auto& f : m_.functions) {
      for (const auto& p : f.params) value(ir::value_key(f.name, p.name));
      for (const auto& b : f.blocks)
        for (const auto& inst : b.insts)
          if (inst.result) value(ir::value_key(f.name, *inst.result));
    }
    for (const auto& [id, site] : pts_.sites) object(id);
    for (const auto& f : m_.functions) {
      for (const auto& b : f.blocks)
        for (std::size_t i = 0; i < b.insts.size(); ++i) visit(f, b, i);
    }
    return std::move(g_);
  }

 private:
  NodeId value(const std::string& key) { return g_.add_node(Node{Node::Kind::Value, key}); }
  NodeId object(const std::string& key) { return g_.add_node(Node{Node::Kind::Object, key}); }

  std::optional<NodeId> def(const ir::Function& f, const ir::Operand& op) {
    if (auto v = std::get_if<ir::ValueRef>(&op)) return value(ir::value_key(f.name, v->name));
    if (auto gr = std::get_if<ir::GlobalRef>(&op)) return value(ir::global_key(gr->name));
    return std::nullopt;
  }

  const pointsto::ObjectSet& targets(const ir::Function& f, const ir::Operand& op) {
    static const pointsto::ObjectSet empty;
    if (auto v = std::get_if<ir::ValueRef>(&op)) return pts_.of(ir::value_key(f.name, v->name));
    if (auto gr = std::get_if<ir::GlobalRef>(&op)) return pts_.of(ir::global_key(gr->name));
    return empty;
  }

  void edge(std::optional<NodeId> from, NodeId to, EdgeLabel l) {
    if (from) g_.add_edge(*from, to, l);
  }

  void visit(const ir::Function& f, const ir::Block& b, std::size_t i) {
    const auto& inst = b.insts[i];
    const auto& ops = inst.operands;
    std::optional<NodeId> res;
    if (inst.result) res = value(ir::value_key(f.name, *inst.result));
    switch (inst.op) {
      case ir::Opcode::Binop:
      case ir::Opcode::Icmp:
      case ir::Opcode::Cast:
      case ir::Opcode::Phi:
        for (const auto& op : ops) edge(def(f, op), *res, EdgeLabel::Data);
        break;
      case ir::Opcode::Select:
        edge(def(f, ops[0]), *res, EdgeLabel::SelectCond);
        edge(def(f, ops[1]), *res, EdgeLabel::Data);
        edge(def(f, ops[2]), *res, EdgeLabel::Data);
        break;
      case ir::Opcode::Addr:
        edge(def(f, ops[0]), *res, EdgeLabel::Data);
        for (std::size_t k = 1; k < ops.size(); ++k) edge(def(f, ops[k]), *res, EdgeLabel::AddrIndex);
        break;
      case ir::Opcode::Load:
        for (const auto& o : targets(f, ops[0])) edge(object(o), *res, EdgeLabel::MemoryRead);
        edge(def(f, ops[0]), *res, EdgeLabel::MemoryRead);
        break;
      case ir::Opcode::Store:
        for (const auto& o : targets(f, ops[1])) {
          NodeId obj = object(o);
          edge(def(f, ops[0]), obj, EdgeLabel::MemoryWrite);
          edge(def(f, ops[1]), obj, EdgeLabel::MemoryWrite);
        }
        break;
      case ir::Opcode::Call: visit_call(f, inst, res); break;
      default: break;
    }
  }

  void visit_call(const ir::Function& f, const ir::Instruction& inst, std::optional<NodeId> res) {
    if (const ir::Function* callee = m_.find_function(inst.callee)) {
      for (std::size_t k = 0; k < callee->params.size() && k < inst.operands.size(); ++k)
        edge(def(f, inst.operands[k]), value(ir::value_key(callee->name, callee->params[k].name)),
             EdgeLabel::CallArg);
      if (res)
        for (const auto& cb : callee->blocks)
          for (const auto& ci : cb.insts)
            if (ci.op == ir::Opcode::Ret && !ci.operands.empty())
              edge(def(*callee, ci.operands[0]), *res, EdgeLabel::CallRet);
      return;
    }
    // Extern: every argument and every reachable object may flow into the
    // result and into every reachable object.
    std::set<std::string> reach;
    for (const auto& op : inst.operands)
      for (const auto& o : targets(f, op)) reach.insert(o);
    if (res && inst.type.is_ptr())
      for (const auto& o : pts_.of(ir::value_key(f.name, *inst.result))) reach.insert(o);
    std::vector<NodeId> objs;
    for (const auto& o : reach) objs.push_back(object(o));
    for (const auto& op : inst.operands) {
      auto a = def(f, op);
      if (res) edge(a, *res, EdgeLabel::CallRet);
      for (NodeId o : objs) edge(a, o, EdgeLabel::MemoryWrite);
    }
    for (NodeId o : objs) {
      if (res) g_.add_edge(o, *res, EdgeLabel::MemoryRead);
      for (NodeId p : objs)
        if (p != o) g_.add_edge(o, p, EdgeLabel::MemoryWrite);
    }
  }

  const ir::Module& m_;
  const pointsto::PointsToMap& pts_;
  ValueFlowGraph g_;
};

}  // namespace

ValueFlowGraph build(const ir::Module& m, const pointsto::PointsToMap& pts) {
  return Builder(m, pts).run();
}

std::set<NodeId> reachable(const ValueFlowGraph& g, const std::set<NodeId>& sources) {
  std::set<NodeId> seen;
  std::deque<NodeId> queue;
  for (NodeId s : sources)
    if (s < g.size() && seen.insert(s).second) queue.push_back(s);
  while (!queue.empty()) {
    NodeId n = queue.front();
    queue.pop_front();
    for (const auto& [succ, label] : g.successors(n))
      if (seen.insert(succ).second) queue.push_back(succ);
  }
  return seen;
}

std::string to_dot(const ValueFlowGraph& g) {
  std::ostringstream os;
  os << "digraph vfg {\n";
  for (NodeId i = 0; i < g.size(); ++i) {
    const Node& n = g.node(i);
    os << "  n" << i << " [label=\"" << n.str() << "\""
       << (n.kind == Node::Kind::Object ? ", shape=box" : "") << "];\n";
  }
  for (const auto& e : g.edges())
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << label_name(e.label) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace oblint::vfg
