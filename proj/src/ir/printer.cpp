#include <sstream>

#include "oblint/ir.hpp"

namespace oblint::ir {
namespace {

void print_init(std::ostream& os, const Init& init, const Type& type) {
  if (init.leaf) {
    os << *init.leaf;
    return;
  }
  bool agg = type.kind == Type::Kind::Aggregate;
  os << (agg ? "{ " : "[");
  for (std::size_t i = 0; i < init.items.size(); ++i) {
    if (i) os << ", ";
    const Type& sub = agg ? (i < type.elems.size() ? type.elems[i] : type)
                          : (type.elems.empty() ? type : type.elems[0]);
    print_init(os, init.items[i], sub);
  }
  os << (agg ? " }" : "]");
}

std::string operands_joined(const Instruction& inst, std::size_t from) {
  std::string s;
  for (std::size_t i = from; i < inst.operands.size(); ++i) {
    if (i > from) s += ", ";
    s += operand_str(inst.operands[i]);
  }
  return s;
}

}  // namespace

std::string print_instruction(const Instruction& inst) {
  std::ostringstream os;
  if (inst.result) os << "%" << *inst.result << " = ";
  const auto& ops = inst.operands;
  switch (inst.op) {
    case Opcode::Alloca:
      os << "alloca " << inst.type.str();
      if (inst.count != 1) os << ", " << inst.count;
      break;
    case Opcode::Load: os << "load " << inst.type.str() << ", " << operand_str(ops.at(0)); break;
    case Opcode::Store:
      os << "store " << inst.type.str() << " " << operand_str(ops.at(0)) << ", "
         << operand_str(ops.at(1));
      break;
    case Opcode::Addr: os << "addr " << inst.type.str() << ", " << operands_joined(inst, 0); break;
    case Opcode::Binop:
      os << binop_name(inst.binop) << " " << inst.type.str() << " " << operands_joined(inst, 0);
      break;
    case Opcode::Icmp:
      os << "icmp " << pred_name(inst.pred) << " " << inst.type.str() << " "
         << operands_joined(inst, 0);
      break;
    case Opcode::Select: os << "select " << inst.type.str() << " " << operands_joined(inst, 0); break;
    case Opcode::Cast:
      os << "cast " << inst.type.str() << " " << operand_str(ops.at(0)) << " to "
         << inst.to_type.str();
      break;
    case Opcode::Phi:
      os << "phi " << inst.type.str() << " ";
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) os << ", ";
        os << "[" << operand_str(ops[i]) << ", " << inst.labels.at(i) << "]";
      }
      break;
    case Opcode::Call:
      os << "call " << inst.type.str() << " " << inst.callee << "(" << operands_joined(inst, 0)
         << ")";
      break;
    case Opcode::Br:
      os << "br " << operand_str(ops.at(0)) << ", " << inst.labels.at(0) << ", "
         << inst.labels.at(1);
      break;
    case Opcode::Jmp: os << "jmp " << inst.labels.at(0); break;
    case Opcode::Ret:
      os << "ret";
      if (!ops.empty()) os << " " << operand_str(ops[0]);
      break;
  }
  return os.str();
}

namespace {

std::string render(const Module& m, const std::set<std::string>* tainted) {
  std::ostringstream os;
  for (const auto& g : m.globals) {
    os << "global @" << g.name << " : " << g.type.str();
    if (g.blinded) os << " blinded";
    if (g.init) {
      os << " = ";
      print_init(os, *g.init, g.type);
    }
    os << "\n";
  }
  for (const auto& e : m.externs) {
    os << "extern " << e.name << "(";
    for (std::size_t i = 0; i < e.params.size(); ++i) {
      if (i) os << ", ";
      os << e.params[i].str();
    }
    os << ") -> " << e.ret.str() << "\n";
  }
  bool first = m.globals.empty() && m.externs.empty();
  for (const auto& f : m.functions) {
    if (!first) os << "\n";
    first = false;
    os << "fn " << f.name << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      const auto& p = f.params[i];
      if (i) os << ", ";
      os << "%" << p.name << ": " << p.type.str();
      if (p.blinded) os << " blinded";
    }
    os << ") -> " << f.ret.str() << " {\n";
    for (const auto& b : f.blocks) {
      os << b.label << ":\n";
      for (const auto& inst : b.insts) {
        os << "  " << print_instruction(inst);
        if (tainted && inst.result && tainted->count(value_key(f.name, *inst.result)))
          os << " !t";
        os << "\n";
      }
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace

std::string print_module(const Module& m) { return render(m, nullptr); }

std::string emit_annotated(const Module& m, const std::set<std::string>& tainted_values) {
  return render(m, &tainted_values);
}

}  // namespace oblint::ir
