#include "oblint/ir.hpp"

#include <sstream>
#include <stdexcept>

namespace oblint::ir {

Type Type::array(Type elem, std::uint64_t len) {
  Type t{Kind::Array};
  t.length = len;
  t.elems.push_back(std::move(elem));
  return t;
}

Type Type::aggregate(std::vector<Type> fields) {
  Type t{Kind::Aggregate};
  t.elems = std::move(fields);
  return t;
}

unsigned Type::bits() const {
  switch (kind) {
    case Kind::I1: return 1;
    case Kind::I8: return 8;
    case Kind::I32: return 32;
    case Kind::I64:
    case Kind::Ptr: return 64;
    default: return 0;
  }
}

std::uint64_t Type::size() const {
  switch (kind) {
    case Kind::I1:
    case Kind::I8: return 1;
    case Kind::I32: return 4;
    case Kind::I64:
    case Kind::Ptr: return 8;
    case Kind::Array: return length * elems.at(0).size();
    case Kind::Aggregate: {
      std::uint64_t total = 0;
      for (const auto& f : elems) total += f.size();
      return total;
    }
    case Kind::Void: return 0;
  }
  return 0;
}

std::uint64_t Type::field_offset(std::size_t index) const {
  std::uint64_t off = 0;
  for (std::size_t i = 0; i < index && i < elems.size(); ++i) off += elems[i].size();
  return off;
}

std::string Type::str() const {
  switch (kind) {
    case Kind::I1: return "i1";
    case Kind::I8: return "i8";
    case Kind::I32: return "i32";
    case Kind::I64: return "i64";
    case Kind::Ptr: return "ptr";
    case Kind::Void: return "void";
    case Kind::Array: return "[" + std::to_string(length) + " x " + elems.at(0).str() + "]";
    case Kind::Aggregate: {
      std::string s = "{ ";
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (i) s += ", ";
        s += elems[i].str();
      }
      return s + " }";
    }
  }
  return "?";
}

std::string operand_str(const Operand& op) {
  if (auto v = std::get_if<ValueRef>(&op)) return "%" + v->name;
  if (auto g = std::get_if<GlobalRef>(&op)) return "@" + g->name;
  return std::to_string(std::get<Const>(op).value);
}

std::string_view opcode_name(Opcode op) {
  switch (op) {
    case Opcode::Alloca: return "alloca";
    case Opcode::Load: return "load";
    case Opcode::Store: return "store";
    case Opcode::Addr: return "addr";
    case Opcode::Binop: return "binop";
    case Opcode::Icmp: return "icmp";
    case Opcode::Select: return "select";
    case Opcode::Cast: return "cast";
    case Opcode::Phi: return "phi";
    case Opcode::Call: return "call";
    case Opcode::Br: return "br";
    case Opcode::Jmp: return "jmp";
    case Opcode::Ret: return "ret";
  }
  return "?";
}

namespace {
constexpr std::pair<BinOp, std::string_view> kBinops[] = {
    {BinOp::Add, "add"},   {BinOp::Sub, "sub"},   {BinOp::Mul, "mul"},   {BinOp::Sdiv, "sdiv"},
    {BinOp::Udiv, "udiv"}, {BinOp::Srem, "srem"}, {BinOp::Urem, "urem"}, {BinOp::And, "and"},
    {BinOp::Or, "or"},     {BinOp::Xor, "xor"},   {BinOp::Shl, "shl"},   {BinOp::Lshr, "lshr"},
    {BinOp::Ashr, "ashr"},
};
constexpr std::pair<Pred, std::string_view> kPreds[] = {
    {Pred::Eq, "eq"},   {Pred::Ne, "ne"},   {Pred::Slt, "slt"}, {Pred::Sle, "sle"},
    {Pred::Sgt, "sgt"}, {Pred::Sge, "sge"}, {Pred::Ult, "ult"}, {Pred::Ule, "ule"},
    {Pred::Ugt, "ugt"}, {Pred::Uge, "uge"},
};
}  // namespace

std::string_view binop_name(BinOp op) {
  for (auto [k, n] : kBinops)
    if (k == op) return n;
  return "?";
}

std::string_view pred_name(Pred p) {
  for (auto [k, n] : kPreds)
    if (k == p) return n;
  return "?";
}

std::optional<BinOp> parse_binop(std::string_view s) {
  for (auto [k, n] : kBinops)
    if (n == s) return k;
  return std::nullopt;
}

std::optional<Pred> parse_pred(std::string_view s) {
  for (auto [k, n] : kPreds)
    if (n == s) return k;
  return std::nullopt;
}

bool is_division(BinOp op) {
  return op == BinOp::Sdiv || op == BinOp::Udiv || op == BinOp::Srem || op == BinOp::Urem;
}

std::string InstId::str() const { return function + ":" + block + ":" + std::to_string(index); }

Type Instruction::result_type() const {
  switch (op) {
    case Opcode::Alloca:
    case Opcode::Addr: return Type::ptr();
    case Opcode::Icmp: return Type::i1();
    case Opcode::Cast: return to_type;
    case Opcode::Load:
    case Opcode::Binop:
    case Opcode::Select:
    case Opcode::Phi:
    case Opcode::Call: return type;
    default: return Type::void_();
  }
}

bool same_structure(const Instruction& a, const Instruction& b) {
  if (a.op != b.op || a.result != b.result || a.operands != b.operands) return false;
  switch (a.op) {
    case Opcode::Alloca: return a.type == b.type && a.count == b.count;
    case Opcode::Binop: return a.type == b.type && a.binop == b.binop;
    case Opcode::Icmp: return a.type == b.type && a.pred == b.pred;
    case Opcode::Cast: return a.type == b.type && a.to_type == b.to_type;
    case Opcode::Call: return a.type == b.type && a.callee == b.callee;
    case Opcode::Phi: return a.type == b.type && a.labels == b.labels;
    case Opcode::Br:
    case Opcode::Jmp: return a.labels == b.labels;
    case Opcode::Ret: return true;
    default: return a.type == b.type;
  }
}

const Block* Function::find_block(std::string_view label) const {
  for (const auto& b : blocks)
    if (b.label == label) return &b;
  return nullptr;
}

std::optional<std::size_t> Function::block_index(std::string_view label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].label == label) return i;
  return std::nullopt;
}

const Param* Function::find_param(std::string_view n) const {
  for (const auto& p : params)
    if (p.name == n) return &p;
  return nullptr;
}

const Instruction* Function::at(const InstId& id) const {
  const Block* b = find_block(id.block);
  if (!b || id.index >= b->insts.size()) return nullptr;
  return &b->insts[id.index];
}

const Function* Module::find_function(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

Function* Module::find_function(std::string_view name) {
  for (auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const Extern* Module::find_extern(std::string_view name) const {
  for (const auto& e : externs)
    if (e.name == name) return &e;
  return nullptr;
}

const Global* Module::find_global(std::string_view name) const {
  for (const auto& g : globals)
    if (g.name == name) return &g;
  return nullptr;
}

const Instruction* Module::at(const InstId& id) const {
  const Function* f = find_function(id.function);
  return f ? f->at(id) : nullptr;
}

bool same_structure(const Module& a, const Module& b) {
  if (a.globals.size() != b.globals.size() || a.externs.size() != b.externs.size() ||
      a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.globals.size(); ++i) {
    const auto &x = a.globals[i], &y = b.globals[i];
    if (x.name != y.name || x.type != y.type || x.blinded != y.blinded || x.init != y.init)
      return false;
  }
  for (std::size_t i = 0; i < a.externs.size(); ++i) {
    const auto &x = a.externs[i], &y = b.externs[i];
    if (x.name != y.name || x.params != y.params || x.ret != y.ret) return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto &x = a.functions[i], &y = b.functions[i];
    if (x.name != y.name || x.params != y.params || x.ret != y.ret ||
        x.blocks.size() != y.blocks.size())
      return false;
    for (std::size_t j = 0; j < x.blocks.size(); ++j) {
      const auto &bx = x.blocks[j], &by = y.blocks[j];
      if (bx.label != by.label || bx.insts.size() != by.insts.size()) return false;
      for (std::size_t k = 0; k < bx.insts.size(); ++k)
        if (!same_structure(bx.insts[k], by.insts[k])) return false;
    }
  }
  return true;
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << (severity == Severity::Error ? "error" : "warning");
  if (inst)
    os << " at " << inst->str();
  else if (loc.line > 0)
    os << " at " << loc.line << ":" << loc.column;
  os << ": " << message;
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.is_error()) return true;
  return false;
}

std::string value_key(std::string_view function, std::string_view name) {
  std::string k(function);
  k += ":%";
  k += name;
  return k;
}

std::string global_key(std::string_view name) { return "@" + std::string(name); }

namespace {
void collect_leaves(const Type& t, std::uint64_t base,
                    std::vector<std::pair<std::uint64_t, Type>>& out) {
  if (t.kind == Type::Kind::Array) {
    const Type& e = t.elems.at(0);
    for (std::uint64_t i = 0; i < t.length; ++i) collect_leaves(e, base + i * e.size(), out);
  } else if (t.kind == Type::Kind::Aggregate) {
    for (std::size_t i = 0; i < t.elems.size(); ++i)
      collect_leaves(t.elems[i], base + t.field_offset(i), out);
  } else if (t.is_scalar()) {
    out.emplace_back(base, t);
  }
}
}  // namespace

std::vector<std::pair<std::uint64_t, Type>> scalar_leaves(const Type& t) {
  std::vector<std::pair<std::uint64_t, Type>> out;
  collect_leaves(t, 0, out);
  return out;
}

}  // namespace oblint::ir
