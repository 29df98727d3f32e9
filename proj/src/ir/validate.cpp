#include <map>
#include <unordered_map>

#include "oblint/ir.hpp"

namespace oblint::ir {

std::vector<std::vector<std::size_t>> predecessors(const Function& f) {
  std::vector<std::vector<std::size_t>> preds(f.blocks.size());
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    const auto& insts = f.blocks[i].insts;
    if (insts.empty() || !insts.back().is_terminator()) continue;
    std::set<std::size_t> seen;
    for (const auto& l : insts.back().labels)
      if (auto t = f.block_index(l); t && seen.insert(*t).second) preds[*t].push_back(i);
  }
  return preds;
}

std::vector<std::set<std::size_t>> compute_dominators(const Function& f) {
  const std::size_t n = f.blocks.size();
  auto preds = predecessors(f);
  // Reachability first: unreachable blocks keep the empty set.
  std::vector<bool> reach(n, false);
  if (n) {
    std::vector<std::size_t> stack{0};
    reach[0] = true;
    while (!stack.empty()) {
      std::size_t b = stack.back();
      stack.pop_back();
      const auto& insts = f.blocks[b].insts;
      if (insts.empty() || !insts.back().is_terminator()) continue;
      for (const auto& l : insts.back().labels)
        if (auto t = f.block_index(l); t && !reach[*t]) {
          reach[*t] = true;
          stack.push_back(*t);
        }
    }
  }
  std::set<std::size_t> all;
  for (std::size_t i = 0; i < n; ++i)
    if (reach[i]) all.insert(i);
  std::vector<std::set<std::size_t>> dom(n);
  for (std::size_t i = 0; i < n; ++i)
    if (reach[i]) dom[i] = i == 0 ? std::set<std::size_t>{0} : all;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t b = 1; b < n; ++b) {
      if (!reach[b]) continue;
      std::set<std::size_t> next;
      bool first = true;
      for (std::size_t p : preds[b]) {
        if (!reach[p]) continue;
        if (first) {
          next = dom[p];
          first = false;
        } else {
          std::set<std::size_t> meet;
          for (auto x : next)
            if (dom[p].count(x)) meet.insert(x);
          next = std::move(meet);
        }
      }
      next.insert(b);
      if (next != dom[b]) {
        dom[b] = std::move(next);
        changed = true;
      }
    }
  }
  return dom;
}

namespace {

bool produces_value(const Instruction& inst) {
  switch (inst.op) {
    case Opcode::Alloca:
    case Opcode::Load:
    case Opcode::Addr:
    case Opcode::Binop:
    case Opcode::Icmp:
    case Opcode::Select:
    case Opcode::Cast:
    case Opcode::Phi: return true;
    default: return false;
  }
}

bool init_matches(const Init& init, const Type& t) {
  if (init.leaf) return t.is_int();
  if (t.kind == Type::Kind::Array) {
    if (init.items.size() != t.length) return false;
    for (const auto& i : init.items)
      if (!init_matches(i, t.elems[0])) return false;
    return true;
  }
  if (t.kind == Type::Kind::Aggregate) {
    if (init.items.size() != t.elems.size()) return false;
    for (std::size_t i = 0; i < init.items.size(); ++i)
      if (!init_matches(init.items[i], t.elems[i])) return false;
    return true;
  }
  return false;
}

class FunctionChecker {
 public:
  FunctionChecker(const Module& m, const Function& f, std::vector<Diagnostic>& out)
      : m_(m), f_(f), out_(out) {}

  void run() {
    check_signature();
    index_definitions();
    for (std::size_t b = 0; b < f_.blocks.size(); ++b) check_block(b);
    check_dominance();
  }

 private:
  struct DefSite {
    std::size_t block;
    std::size_t index;
  };

  void error(const std::optional<InstId>& id, SourceLoc loc, std::string msg) {
    Diagnostic d;
    d.inst = id;
    d.loc = loc;
    d.message = std::move(msg);
    out_.push_back(std::move(d));
  }
  void error(std::size_t b, std::size_t i, std::string msg) {
    error(InstId{f_.name, f_.blocks[b].label, i}, f_.blocks[b].insts[i].loc, std::move(msg));
  }

  void check_signature() {
    std::set<std::string> names;
    for (const auto& p : f_.params) {
      if (!p.type.is_scalar())
        error(std::nullopt, f_.loc,
              "parameter %" + p.name + " of '" + f_.name + "' must have scalar type");
      if (!names.insert(p.name).second)
        error(std::nullopt, f_.loc, "duplicate parameter %" + p.name + " in '" + f_.name + "'");
    }
    if (!f_.ret.is_scalar() && !f_.ret.is_void())
      error(std::nullopt, f_.loc, "return type of '" + f_.name + "' must be scalar or void");
    std::set<std::string> labels;
    for (const auto& b : f_.blocks)
      if (!labels.insert(b.label).second)
        error(std::nullopt, f_.loc, "duplicate block label '" + b.label + "' in '" + f_.name + "'");
  }

  void index_definitions() {
    for (const auto& p : f_.params) types_.emplace(p.name, p.type);
    for (std::size_t b = 0; b < f_.blocks.size(); ++b) {
      const auto& insts = f_.blocks[b].insts;
      for (std::size_t i = 0; i < insts.size(); ++i) {
        const auto& inst = insts[i];
        if (!inst.result) continue;
        if (types_.count(*inst.result)) {
          error(b, i, "SSA: value %" + *inst.result + " defined more than once");
          continue;
        }
        types_.emplace(*inst.result, inst.result_type());
        defs_.emplace(*inst.result, DefSite{b, i});
      }
    }
  }

  void expect_operand(std::size_t b, std::size_t i, const Operand& op, const Type& want,
                      std::string_view role) {
    if (auto v = std::get_if<ValueRef>(&op)) {
      auto it = types_.find(v->name);
      if (it == types_.end()) {
        error(b, i, "use of undefined value %" + v->name);
        return;
      }
      if (it->second != want)
        error(b, i, std::string(role) + " %" + v->name + " has type " + it->second.str() +
                        ", expected " + want.str());
    } else if (auto g = std::get_if<GlobalRef>(&op)) {
      if (!m_.find_global(g->name)) error(b, i, "use of undefined global @" + g->name);
      if (!want.is_ptr())
        error(b, i, std::string(role) + " @" + g->name + " is an address, expected " + want.str());
    } else if (!want.is_int()) {
      error(b, i, std::string(role) + " constant is not valid for type " + want.str());
    }
  }

  std::optional<Type> operand_type(const Operand& op) const {
    if (auto v = std::get_if<ValueRef>(&op)) {
      auto it = types_.find(v->name);
      if (it == types_.end()) return std::nullopt;
      return it->second;
    }
    if (std::holds_alternative<GlobalRef>(op)) return Type::ptr();
    return std::nullopt;
  }

  void expect_label(std::size_t b, std::size_t i, const std::string& label) {
    if (!f_.find_block(label)) error(b, i, "unknown block label '" + label + "'");
  }

  void check_block(std::size_t b) {
    const Block& blk = f_.blocks[b];
    if (blk.insts.empty() || !blk.insts.back().is_terminator()) {
      error(InstId{f_.name, blk.label, blk.insts.empty() ? 0 : blk.insts.size() - 1},
            blk.insts.empty() ? f_.loc : blk.insts.back().loc,
            "missing terminator in block '" + blk.label + "'");
    }
    bool past_phis = false;
    for (std::size_t i = 0; i < blk.insts.size(); ++i) {
      const auto& inst = blk.insts[i];
      if (inst.is_terminator() && i + 1 != blk.insts.size())
        error(b, i, "terminator in the middle of block '" + blk.label + "'");
      if (inst.op == Opcode::Phi) {
        if (past_phis) error(b, i, "phi after non-phi instruction");
      } else {
        past_phis = true;
      }
      check_instruction(b, i, inst);
    }
  }

  void check_instruction(std::size_t b, std::size_t i, const Instruction& inst) {
    const auto& ops = inst.operands;
    bool wants_result = produces_value(inst);
    if (inst.op == Opcode::Call) {
      wants_result = !inst.type.is_void();
      if (inst.result && inst.type.is_void()) error(b, i, "void call cannot define a value");
    } else if (wants_result && !inst.result) {
      error(b, i, std::string(opcode_name(inst.op)) + " must define a value");
    } else if (!wants_result && inst.result) {
      error(b, i, std::string(opcode_name(inst.op)) + " does not define a value");
    }

    switch (inst.op) {
      case Opcode::Alloca:
        if (inst.type.is_void()) error(b, i, "alloca of void");
        break;
      case Opcode::Load:
        if (!inst.type.is_scalar()) error(b, i, "load type must be scalar");
        expect_operand(b, i, ops.at(0), Type::ptr(), "load address");
        break;
      case Opcode::Store:
        if (!inst.type.is_scalar()) error(b, i, "store type must be scalar");
        expect_operand(b, i, ops.at(0), inst.type, "stored value");
        expect_operand(b, i, ops.at(1), Type::ptr(), "store address");
        break;
      case Opcode::Addr: check_addr(b, i, inst); break;
      case Opcode::Binop:
        if (!inst.type.is_int()) error(b, i, "binop type must be an integer type");
        expect_operand(b, i, ops.at(0), inst.type, "operand");
        expect_operand(b, i, ops.at(1), inst.type, "operand");
        break;
      case Opcode::Icmp:
        if (!inst.type.is_scalar()) {
          error(b, i, "icmp type must be scalar");
        } else if (inst.type.is_ptr() && inst.pred != Pred::Eq && inst.pred != Pred::Ne) {
          error(b, i, "address comparison supports only eq and ne");
        }
        expect_operand(b, i, ops.at(0), inst.type, "operand");
        expect_operand(b, i, ops.at(1), inst.type, "operand");
        break;
      case Opcode::Select:
        if (!inst.type.is_scalar()) error(b, i, "select type must be scalar");
        expect_operand(b, i, ops.at(0), Type::i1(), "select condition");
        expect_operand(b, i, ops.at(1), inst.type, "operand");
        expect_operand(b, i, ops.at(2), inst.type, "operand");
        break;
      case Opcode::Cast:
        if (!((inst.type.is_int() && inst.to_type.is_int()) ||
              (inst.type.is_ptr() && inst.to_type.is_ptr())))
          error(b, i, "cast must be integer-to-integer or ptr-to-ptr");
        expect_operand(b, i, ops.at(0), inst.type, "operand");
        break;
      case Opcode::Phi: check_phi(b, i, inst); break;
      case Opcode::Call: check_call(b, i, inst); break;
      case Opcode::Br:
        expect_operand(b, i, ops.at(0), Type::i1(), "branch condition");
        expect_label(b, i, inst.labels.at(0));
        expect_label(b, i, inst.labels.at(1));
        break;
      case Opcode::Jmp: expect_label(b, i, inst.labels.at(0)); break;
      case Opcode::Ret:
        if (f_.ret.is_void()) {
          if (!ops.empty()) error(b, i, "ret with a value in void function");
        } else if (ops.empty()) {
          error(b, i, "ret without a value in function returning " + f_.ret.str());
        } else {
          expect_operand(b, i, ops[0], f_.ret, "returned value");
        }
        break;
    }
  }

  void check_addr(std::size_t b, std::size_t i, const Instruction& inst) {
    const auto& ops = inst.operands;
    if (inst.type.is_void()) error(b, i, "addr over void");
    expect_operand(b, i, ops.at(0), Type::ptr(), "addr base");
    const Type* cur = &inst.type;
    for (std::size_t k = 1; k < ops.size(); ++k) {
      const Operand& idx = ops[k];
      if (auto t = operand_type(idx); t && !t->is_int()) {
        error(b, i, "addr index must be an integer");
      } else if (std::holds_alternative<GlobalRef>(idx)) {
        error(b, i, "addr index must be an integer");
      } else if (!t && std::holds_alternative<ValueRef>(idx)) {
        error(b, i, "use of undefined value " + operand_str(idx));
      }
      if (k == 1) continue;  // first index steps over whole elements of type
      if (cur->kind == Type::Kind::Array) {
        cur = &cur->elems[0];
      } else if (cur->kind == Type::Kind::Aggregate) {
        auto c = std::get_if<Const>(&idx);
        if (!c) {
          error(b, i, "aggregate field index must be a constant");
          return;
        }
        if (c->value < 0 || static_cast<std::size_t>(c->value) >= cur->elems.size()) {
          error(b, i, "aggregate field index out of range");
          return;
        }
        cur = &cur->elems[static_cast<std::size_t>(c->value)];
      } else {
        error(b, i, "too many addr indices for type " + inst.type.str());
        return;
      }
    }
  }

  void check_phi(std::size_t b, std::size_t i, const Instruction& inst) {
    if (!inst.type.is_scalar()) error(b, i, "phi type must be scalar");
    for (const auto& op : inst.operands) expect_operand(b, i, op, inst.type, "incoming value");
    if (preds_.empty()) preds_ = predecessors(f_);
    std::multiset<std::string> incoming(inst.labels.begin(), inst.labels.end());
    std::set<std::string> expected;
    for (auto p : preds_[b]) expected.insert(f_.blocks[p].label);
    for (const auto& l : expected)
      if (incoming.count(l) != 1)
        error(b, i, "phi must list exactly one incoming value for predecessor '" + l + "'");
    for (const auto& l : std::set<std::string>(incoming.begin(), incoming.end()))
      if (!expected.count(l)) error(b, i, "phi lists '" + l + "', which is not a predecessor");
  }

  void check_call(std::size_t b, std::size_t i, const Instruction& inst) {
    std::vector<Type> params;
    Type ret;
    if (const Function* callee = m_.find_function(inst.callee)) {
      for (const auto& p : callee->params) params.push_back(p.type);
      ret = callee->ret;
    } else if (const Extern* ext = m_.find_extern(inst.callee)) {
      params = ext->params;
      ret = ext->ret;
    } else {
      error(b, i, "unknown call target '" + inst.callee + "'");
      return;
    }
    if (ret != inst.type)
      error(b, i, "call type " + inst.type.str() + " does not match '" + inst.callee +
                      "' returning " + ret.str());
    if (params.size() != inst.operands.size()) {
      error(b, i, "call to '" + inst.callee + "' expects " + std::to_string(params.size()) +
                      " arguments, got " + std::to_string(inst.operands.size()));
      return;
    }
    for (std::size_t k = 0; k < params.size(); ++k)
      expect_operand(b, i, inst.operands[k], params[k], "argument");
  }

  void check_dominance() {
    auto dom = compute_dominators(f_);
    if (preds_.empty()) preds_ = predecessors(f_);
    auto dominates = [&](std::size_t def_block, std::size_t use_block) {
      return dom[use_block].count(def_block) > 0;
    };
    for (std::size_t b = 0; b < f_.blocks.size(); ++b) {
      if (dom[b].empty()) continue;  // unreachable
      const auto& insts = f_.blocks[b].insts;
      for (std::size_t i = 0; i < insts.size(); ++i) {
        const auto& inst = insts[i];
        for (std::size_t k = 0; k < inst.operands.size(); ++k) {
          auto v = std::get_if<ValueRef>(&inst.operands[k]);
          if (!v) continue;
          auto it = defs_.find(v->name);
          if (it == defs_.end()) continue;  // parameter or undefined
          const DefSite d = it->second;
          bool ok;
          if (inst.op == Opcode::Phi) {
            auto pred = f_.block_index(inst.labels.at(k));
            if (!pred || dom[*pred].empty()) continue;
            ok = dominates(d.block, *pred);
          } else if (d.block == b) {
            ok = d.index < i;
          } else {
            ok = dominates(d.block, b);
          }
          if (!ok)
            error(b, i, "SSA dominance: use of %" + v->name + " is not dominated by its definition");
        }
      }
    }
  }

  const Module& m_;
  const Function& f_;
  std::vector<Diagnostic>& out_;
  std::unordered_map<std::string, Type> types_;
  std::unordered_map<std::string, DefSite> defs_;
  std::vector<std::vector<std::size_t>> preds_;
};

}  // namespace

std::vector<Diagnostic> validate_module(const Module& m) {
  std::vector<Diagnostic> out;
  auto module_error = [&](SourceLoc loc, std::string msg) {
    Diagnostic d;
    d.loc = loc;
    d.message = std::move(msg);
    out.push_back(std::move(d));
  };
  std::set<std::string> globals;
  for (const auto& g : m.globals) {
    if (!globals.insert(g.name).second) module_error(g.loc, "duplicate global @" + g.name);
    if (g.type.is_void()) module_error(g.loc, "global @" + g.name + " has void type");
    if (g.init && !init_matches(*g.init, g.type))
      module_error(g.loc, "initializer of @" + g.name + " does not match type " + g.type.str());
  }
  std::set<std::string> symbols;
  for (const auto& e : m.externs) {
    if (!symbols.insert(e.name).second) module_error(e.loc, "duplicate symbol '" + e.name + "'");
    for (const auto& p : e.params)
      if (!p.is_scalar()) module_error(e.loc, "extern '" + e.name + "' parameters must be scalar");
    if (!e.ret.is_scalar() && !e.ret.is_void())
      module_error(e.loc, "extern '" + e.name + "' must return scalar or void");
  }
  for (const auto& f : m.functions)
    if (!symbols.insert(f.name).second) module_error(f.loc, "duplicate symbol '" + f.name + "'");
  for (const auto& f : m.functions) FunctionChecker(m, f, out).run();
  return out;
}

}  // namespace oblint::ir
