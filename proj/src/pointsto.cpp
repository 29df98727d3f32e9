#include "oblint/pointsto.hpp"

#include <deque>
#include <sstream>
#include <unordered_map>

namespace oblint::pointsto {

std::string_view kind_name(AbstractObject::Kind k) {
  switch (k) {
    case AbstractObject::Kind::Stack: return "stack";
    case AbstractObject::Kind::Global: return "global";
    case AbstractObject::Kind::Extern: return "extern";
  }
  return "?";
}

const ObjectSet& PointsToMap::of(const std::string& var) const {
  static const ObjectSet empty;
  auto it = values.find(var);
  return it == values.end() ? empty : it->second;
}

const ObjectSet& PointsToMap::contents_of(const std::string& object) const {
  static const ObjectSet empty;
  auto it = contents.find(object);
  return it == contents.end() ? empty : it->second;
}

std::string incoming_object(std::string_view function, std::string_view param) {
  return ir::value_key(function, param);
}

std::string extern_temp(const ir::InstId& call, std::size_t k) {
  return "$" + call.str() + "." + std::to_string(k);
}

namespace {

class Collector {
 public:
  explicit Collector(const ir::Module& m) : m_(m) {}

  ConstraintSet run() {
    for (const auto& g : m_.globals) {
      std::string id = ir::global_key(g.name);
      add_site(id, AbstractObject::Kind::Global);
      emit(Constraint::Kind::AddressOf, id, id);
    }
    for (const auto& f : m_.functions) {
      for (const auto& p : f.params) {
        if (!p.type.is_ptr()) continue;
        std::string obj = incoming_object(f.name, p.name);
        add_site(obj, AbstractObject::Kind::Extern);
        emit(Constraint::Kind::AddressOf, ir::value_key(f.name, p.name), obj);
      }
    }
    for (const auto& f : m_.functions) collect_function(f);
    return std::move(out_);
  }

 private:
  void add_site(const std::string& id, AbstractObject::Kind k) {
    out_.sites.emplace(id, AbstractObject{id, k});
  }
  void emit(Constraint::Kind k, std::string lhs, std::string rhs) {
    out_.constraints.push_back(Constraint{k, std::move(lhs), std::move(rhs)});
  }

  /// Variable name for an address-typed operand, or empty for constants.
  std::string var(const ir::Function& f, const ir::Operand& op) const {
    if (auto v = std::get_if<ir::ValueRef>(&op)) return ir::value_key(f.name, v->name);
    if (auto g = std::get_if<ir::GlobalRef>(&op)) return ir::global_key(g->name);
    return {};
  }

  void copy(const std::string& lhs, const std::string& rhs) {
    if (!lhs.empty() && !rhs.empty()) emit(Constraint::Kind::Copy, lhs, rhs);
  }

  void collect_function(const ir::Function& f) {
    for (const auto& b : f.blocks) {
      for (std::size_t i = 0; i < b.insts.size(); ++i) {
        const auto& inst = b.insts[i];
        const ir::InstId id{f.name, b.label, i};
        std::string res = inst.result ? ir::value_key(f.name, *inst.result) : std::string();
        const auto& ops = inst.operands;
        switch (inst.op) {
          case ir::Opcode::Alloca:
            add_site(id.str(), AbstractObject::Kind::Stack);
            emit(Constraint::Kind::AddressOf, res, id.str());
            break;
          case ir::Opcode::Addr: copy(res, var(f, ops[0])); break;
          case ir::Opcode::Cast:
            if (inst.to_type.is_ptr()) copy(res, var(f, ops[0]));
            break;
          case ir::Opcode::Select:
            if (inst.type.is_ptr()) {
              copy(res, var(f, ops[1]));
              copy(res, var(f, ops[2]));
            }
            break;
          case ir::Opcode::Phi:
            if (inst.type.is_ptr())
              for (const auto& op : ops) copy(res, var(f, op));
            break;
          case ir::Opcode::Load:
            if (inst.type.is_ptr()) {
              auto addr = var(f, ops[0]);
              if (!addr.empty()) emit(Constraint::Kind::Load, res, addr);
            }
            break;
          case ir::Opcode::Store:
            if (inst.type.is_ptr()) {
              auto val = var(f, ops[0]);
              auto addr = var(f, ops[1]);
              if (!val.empty() && !addr.empty()) emit(Constraint::Kind::Store, addr, val);
            }
            break;
          case ir::Opcode::Call: collect_call(f, inst, id, res); break;
          default: break;
        }
      }
    }
  }

  void collect_call(const ir::Function& f, const ir::Instruction& inst, const ir::InstId& id,
                    const std::string& res) {
    if (const ir::Function* callee = m_.find_function(inst.callee)) {
      for (std::size_t k = 0; k < callee->params.size() && k < inst.operands.size(); ++k)
        if (callee->params[k].type.is_ptr())
          copy(ir::value_key(callee->name, callee->params[k].name), var(f, inst.operands[k]));
      if (!res.empty() && callee->ret.is_ptr()) {
        for (const auto& cb : callee->blocks)
          for (const auto& ci : cb.insts)
            if (ci.op == ir::Opcode::Ret && !ci.operands.empty())
              copy(res, var(*callee, ci.operands[0]));
      }
      return;
    }
    const ir::Extern* ext = m_.find_extern(inst.callee);
    if (!ext) return;
    // Unknown code: it may return a fresh object or any address it was given,
    // and may copy pointers between any two memory regions it can reach.
    std::vector<std::string> ptr_args;
    for (std::size_t k = 0; k < ext->params.size() && k < inst.operands.size(); ++k)
      if (ext->params[k].is_ptr())
        if (auto a = var(f, inst.operands[k]); !a.empty()) ptr_args.push_back(a);
    if (!res.empty() && ext->ret.is_ptr()) {
      add_site(id.str(), AbstractObject::Kind::Extern);
      emit(Constraint::Kind::AddressOf, res, id.str());
      for (const auto& a : ptr_args) copy(res, a);
      ptr_args.push_back(res);
    }
    for (std::size_t s = 0; s < ptr_args.size(); ++s) {
      std::string tmp = extern_temp(id, s);
      emit(Constraint::Kind::Load, tmp, ptr_args[s]);
      for (const auto& dst : ptr_args) emit(Constraint::Kind::Store, dst, tmp);
    }
  }

  const ir::Module& m_;
  ConstraintSet out_;
};

/// Worklist solver over interned variables and objects. Objects take part as
/// nodes too: their points-to set is what is stored inside them.
class Solver {
 public:
  PointsToMap run(const std::vector<Constraint>& cs) {
    for (const auto& c : cs) {
      int l = var(c.lhs);
      switch (c.kind) {
        case Constraint::Kind::AddressOf: {
          int o = obj(c.rhs);
          if (pts_[l].insert(o).second) push(l);
          break;
        }
        case Constraint::Kind::Copy: add_edge(var(c.rhs), l); break;
        case Constraint::Kind::Load: loads_[var(c.rhs)].push_back(l); break;
        case Constraint::Kind::Store: stores_[l].push_back(var(c.rhs)); break;
      }
    }
    for (int n = 0; n < static_cast<int>(names_.size()); ++n) push(n);
    while (!work_.empty()) {
      int n = work_.front();
      work_.pop_front();
      queued_[n] = false;
      process(n);
    }
    PointsToMap out;
    for (int n = 0; n < static_cast<int>(names_.size()); ++n) {
      ObjectSet s;
      for (int o : pts_[n]) s.insert(names_[o].substr(2));
      const std::string& nm = names_[n];
      if (nm[0] == 'v')
        out.values[nm.substr(2)] = std::move(s);
      else if (!s.empty())
        out.contents[nm.substr(2)] = std::move(s);
    }
    return out;
  }

 private:
  int intern(const std::string& key) {
    auto [it, fresh] = ids_.emplace(key, static_cast<int>(names_.size()));
    if (fresh) {
      names_.push_back(key);
      pts_.emplace_back();
      succ_.emplace_back();
      queued_.push_back(false);
    }
    return it->second;
  }
  int var(const std::string& name) { return intern("v:" + name); }
  int obj(const std::string& name) { return intern("o:" + name); }

  void push(int n) {
    if (!queued_[n]) {
      queued_[n] = true;
      work_.push_back(n);
    }
  }

  void add_edge(int from, int to) {
    if (!succ_[from].insert(to).second) return;
    if (union_into(to, from)) push(to);
  }

  bool union_into(int to, int from) {
    bool changed = false;
    // Copy first: `to` and `from` may alias the same vector slot on growth.
    std::set<int> src = pts_[from];
    for (int o : src) changed |= pts_[to].insert(o).second;
    return changed;
  }

  void process(int n) {
    std::vector<int> objs(pts_[n].begin(), pts_[n].end());
    if (auto it = loads_.find(n); it != loads_.end()) {
      auto dsts = it->second;
      for (int o : objs)
        for (int d : dsts) add_edge(o, d);
    }
    if (auto it = stores_.find(n); it != stores_.end()) {
      auto srcs = it->second;
      for (int o : objs)
        for (int s : srcs) add_edge(s, o);
    }
    std::vector<int> succ(succ_[n].begin(), succ_[n].end());
    for (int s : succ)
      if (union_into(s, n)) push(s);
  }

  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
  std::vector<std::set<int>> pts_;
  std::vector<std::set<int>> succ_;
  std::unordered_map<int, std::vector<int>> loads_;
  std::unordered_map<int, std::vector<int>> stores_;
  std::vector<bool> queued_;
  std::deque<int> work_;
};

}  // namespace

ConstraintSet collect_constraints(const ir::Module& m) { return Collector(m).run(); }

PointsToMap solve(const std::vector<Constraint>& constraints,
                  const std::map<std::string, AbstractObject>& sites) {
  PointsToMap out = Solver().run(constraints);
  out.sites = sites;
  return out;
}

std::string dump(const PointsToMap& pts) {
  std::ostringstream os;
  for (const auto& [v, objs] : pts.values) {
    if (v.empty() || v[0] == '$') continue;
    os << v << " -> {";
    bool first = true;
    for (const auto& o : objs) {
      os << (first ? "" : ", ") << o;
      first = false;
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace oblint::pointsto
