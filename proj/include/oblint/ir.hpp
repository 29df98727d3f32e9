#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oblint::ir {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct Type {
  enum class Kind { I1, I8, I32, I64, Ptr, Array, Aggregate, Void };

  Kind kind = Kind::Void;
  std::uint64_t length = 0;   // Array only
  std::vector<Type> elems;    // Array: one element type; Aggregate: fields

  static Type i1() { return {Kind::I1}; }
  static Type i8() { return {Kind::I8}; }
  static Type i32() { return {Kind::I32}; }
  static Type i64() { return {Kind::I64}; }
  static Type ptr() { return {Kind::Ptr}; }
  static Type void_() { return {Kind::Void}; }
  static Type array(Type elem, std::uint64_t len);
  static Type aggregate(std::vector<Type> fields);

  bool is_int() const {
    return kind == Kind::I1 || kind == Kind::I8 || kind == Kind::I32 || kind == Kind::I64;
  }
  bool is_ptr() const { return kind == Kind::Ptr; }
  bool is_void() const { return kind == Kind::Void; }
  /// Scalar types are the ones that can live in an SSA value.
  bool is_scalar() const { return is_int() || is_ptr(); }

  /// Width in bits for integer types, 64 for ptr.
  unsigned bits() const;
  /// Storage size in bytes. Aggregates are packed.
  std::uint64_t size() const;
  /// Byte offset of field `index` inside an aggregate.
  std::uint64_t field_offset(std::size_t index) const;

  std::string str() const;

  friend bool operator==(const Type&, const Type&) = default;
};

// ---------------------------------------------------------------------------
// Operands and instructions
// ---------------------------------------------------------------------------

struct ValueRef {
  std::string name;  // without the leading '%'
  friend bool operator==(const ValueRef&, const ValueRef&) = default;
};
struct GlobalRef {
  std::string name;  // without the leading '@'
  friend bool operator==(const GlobalRef&, const GlobalRef&) = default;
};
struct Const {
  std::int64_t value = 0;
  friend bool operator==(const Const&, const Const&) = default;
};

using Operand = std::variant<ValueRef, GlobalRef, Const>;

std::string operand_str(const Operand& op);
inline const ValueRef* as_value(const Operand& op) { return std::get_if<ValueRef>(&op); }

enum class Opcode {
  Alloca,
  Load,
  Store,
  Addr,
  Binop,
  Icmp,
  Select,
  Cast,
  Phi,
  Call,
  Br,
  Jmp,
  Ret,
};

enum class BinOp { Add, Sub, Mul, Sdiv, Udiv, Srem, Urem, And, Or, Xor, Shl, Lshr, Ashr };
enum class Pred { Eq, Ne, Slt, Sle, Sgt, Sge, Ult, Ule, Ugt, Uge };

std::string_view opcode_name(Opcode op);
std::string_view binop_name(BinOp op);
std::string_view pred_name(Pred p);
std::optional<BinOp> parse_binop(std::string_view s);
std::optional<Pred> parse_pred(std::string_view s);

bool is_division(BinOp op);

/// Location of an instruction: function, block label, index within the block.
struct InstId {
  std::string function;
  std::string block;
  std::size_t index = 0;

  std::string str() const;
  friend auto operator<=>(const InstId&, const InstId&) = default;
};

struct SourceLoc {
  int line = 0;
  int column = 0;
};

/// One IR instruction. Field usage depends on the opcode:
///
///   alloca  type, count                      -> ptr
///   load    type, operands[0]=addr           -> type
///   store   type, operands[0]=value, [1]=addr
///   addr    type, operands[0]=base, [1..]=indices -> ptr
///   binop   type, binop, operands[0..1]      -> type
///   icmp    type, pred, operands[0..1]       -> i1
///   select  type, operands[0]=cond, [1]=true, [2]=false -> type
///   cast    type(source), to_type, operands[0] -> to_type
///   phi     type, operands[i] from labels[i] -> type
///   call    type(return), callee, operands=args
///   br      operands[0]=cond, labels[0]=then, labels[1]=else
///   jmp     labels[0]
///   ret     optional operands[0]
struct Instruction {
  Opcode op = Opcode::Ret;
  std::optional<std::string> result;
  Type type;
  Type to_type;
  std::uint64_t count = 1;
  BinOp binop = BinOp::Add;
  Pred pred = Pred::Eq;
  std::string callee;
  std::vector<Operand> operands;
  std::vector<std::string> labels;
  SourceLoc loc;

  bool is_terminator() const { return op == Opcode::Br || op == Opcode::Jmp || op == Opcode::Ret; }
  /// Type of the SSA value this instruction defines (void when none).
  Type result_type() const;
};

/// Structural equality, ignoring source locations.
bool same_structure(const Instruction& a, const Instruction& b);

struct Block {
  std::string label;
  std::vector<Instruction> insts;
};

struct Param {
  std::string name;
  Type type;
  bool blinded = false;
  friend bool operator==(const Param&, const Param&) = default;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  Type ret;
  std::vector<Block> blocks;
  SourceLoc loc;

  const Block* find_block(std::string_view label) const;
  std::optional<std::size_t> block_index(std::string_view label) const;
  const Param* find_param(std::string_view name) const;
  const Instruction* at(const InstId& id) const;
};

/// Constant initializer: either a leaf integer or a list of nested initializers.
struct Init {
  std::optional<std::int64_t> leaf;
  std::vector<Init> items;
  friend bool operator==(const Init&, const Init&) = default;
};

struct Global {
  std::string name;
  Type type;
  bool blinded = false;
  std::optional<Init> init;
  SourceLoc loc;
};

struct Extern {
  std::string name;
  std::vector<Type> params;
  Type ret;
  SourceLoc loc;
};

struct Module {
  std::vector<Global> globals;
  std::vector<Extern> externs;
  std::vector<Function> functions;

  const Function* find_function(std::string_view name) const;
  Function* find_function(std::string_view name);
  const Extern* find_extern(std::string_view name) const;
  const Global* find_global(std::string_view name) const;
  const Instruction* at(const InstId& id) const;
};

bool same_structure(const Module& a, const Module& b);

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::optional<InstId> inst;
  SourceLoc loc;
  std::string message;

  std::string str() const;
  bool is_error() const { return severity == Severity::Error; }
};

bool has_errors(const std::vector<Diagnostic>& diags);

// ---------------------------------------------------------------------------
// Value naming shared by the analyses
// ---------------------------------------------------------------------------

/// Module-wide key for a function-local SSA value: "fn:%name".
std::string value_key(std::string_view function, std::string_view name);
/// Module-wide key for a global's address: "@name".
std::string global_key(std::string_view name);

/// Flattened leaf scalar types of `t` with their byte offsets, in layout order.
std::vector<std::pair<std::uint64_t, Type>> scalar_leaves(const Type& t);

// ---------------------------------------------------------------------------
// Front end
// ---------------------------------------------------------------------------

struct ParseResult {
  std::optional<Module> module;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return module.has_value(); }
};

ParseResult parse_module(std::string_view source);

/// Parses a single type such as "[4 x { i32, ptr }]".
std::optional<Type> parse_type(std::string_view text);

/// Structural validation: names, terminators, typing, phi/predecessor
/// agreement and SSA dominance. Diagnostics are ordered by program position.
std::vector<Diagnostic> validate_module(const Module& m);

/// Dominator sets of each block (by index), computed by iterative dataflow.
/// Unreachable blocks get the empty set.
std::vector<std::set<std::size_t>> compute_dominators(const Function& f);
std::vector<std::vector<std::size_t>> predecessors(const Function& f);

std::string print_instruction(const Instruction& inst);
std::string print_module(const Module& m);

/// Set of tainted value keys (see value_key) used to annotate the output.
std::string emit_annotated(const Module& m, const std::set<std::string>& tainted_values);

}  // namespace oblint::ir
