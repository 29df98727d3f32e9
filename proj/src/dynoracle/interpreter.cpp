#include <cstring>
#include <limits>
#include <unordered_map>

#include "oblint/dynoracle.hpp"
#include "oblint/pointsto.hpp"

namespace oblint::dynoracle {
namespace {

constexpr std::uint32_t kNoObject = std::numeric_limits<std::uint32_t>::max();

std::uint64_t width_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

std::int64_t sign_extend(std::uint64_t v, unsigned bits) {
  if (bits >= 64) return static_cast<std::int64_t>(v);
  std::uint64_t sign = std::uint64_t{1} << (bits - 1);
  v &= width_mask(bits);
  return static_cast<std::int64_t>((v ^ sign) - sign);
}

/// A register value. Addresses are (object, byte offset) pairs.
struct Val {
  std::uint64_t bits = 0;
  bool ptr = false;
  std::uint32_t obj = kNoObject;
  std::int64_t off = 0;
  bool taint = false;
};

struct Object {
  std::vector<std::uint8_t> bytes;
  std::vector<bool> taint;
  std::string site;
  bool live = true;
};

struct TrapSignal {
  std::string message;
};

struct Frame {
  const ir::Function* fn = nullptr;
  std::unordered_map<std::string, Val> env;
  std::size_t block = 0;
  std::size_t ip = 0;
  std::vector<std::uint32_t> allocas;
  /// Result name in the caller frame, if the call defines a value.
  std::optional<std::string> result_in_caller;
};

class Machine {
 public:
  Machine(const ir::Module& m, const RunConfig& config, RunResult& out)
      : m_(m), config_(config), out_(out) {}

  void run(const Harness& h) {
    const ir::Function* entry = m_.find_function(h.entry);
    setup_globals();
    std::vector<Val> args;
    for (std::size_t i = 0; i < h.args.size(); ++i) args.push_back(materialize_arg(*entry, i, h.args[i]));
    const std::uint64_t limit = config_.max_steps ? config_.max_steps : h.max_steps;
    push_frame(*entry, args, std::nullopt);
    try {
      while (!stack_.empty()) {
        if (out_.steps >= limit) throw TrapSignal{"step limit of " + std::to_string(limit) + " exceeded"};
        step();
      }
    } catch (const TrapSignal& t) {
      out_.trap = Trap{current_id(), t.message};
    }
    collect_outputs();
  }

 private:
  // -- setup ---------------------------------------------------------------

  std::uint32_t new_object(std::uint64_t size, std::string site) {
    Object o;
    o.bytes.assign(size, 0);
    o.taint.assign(size, false);
    o.site = std::move(site);
    objects_.push_back(std::move(o));
    return static_cast<std::uint32_t>(objects_.size() - 1);
  }

  void write_leaves(std::uint32_t obj, const ir::Type& type, const std::vector<std::int64_t>& vals) {
    auto leaves = ir::scalar_leaves(type);
    for (std::size_t i = 0; i < leaves.size() && i < vals.size(); ++i) {
      const auto& [off, lt] = leaves[i];
      write_int(objects_[obj], off, lt.size(), static_cast<std::uint64_t>(vals[i]));
    }
  }

  void init_from(std::uint32_t obj, const ir::Init& init, const ir::Type& type, std::uint64_t base) {
    if (init.leaf) {
      write_int(objects_[obj], base, type.size(), static_cast<std::uint64_t>(*init.leaf));
      return;
    }
    for (std::size_t i = 0; i < init.items.size(); ++i) {
      if (type.kind == ir::Type::Kind::Array)
        init_from(obj, init.items[i], type.elems[0], base + i * type.elems[0].size());
      else
        init_from(obj, init.items[i], type.elems[i], base + type.field_offset(i));
    }
  }

  void setup_globals() {
    for (const auto& g : m_.globals) {
      std::uint32_t id = new_object(g.type.size(), ir::global_key(g.name));
      if (g.init) init_from(id, *g.init, g.type, 0);
      if (g.blinded) {
        auto& o = objects_[id];
        o.taint.assign(o.taint.size(), true);
        note_object_taint(id);
      }
      globals_.emplace(g.name, id);
      global_order_.push_back(id);
    }
  }

  Val materialize_arg(const ir::Function& f, std::size_t i, const ArgSpec& a) {
    const ir::Param& p = f.params[i];
    if (!p.type.is_ptr()) {
      Val v;
      v.bits = static_cast<std::uint64_t>(a.values.empty() ? 0 : a.values[0]) & width_mask(p.type.bits());
      v.taint = a.tainted();
      return v;
    }
    std::uint32_t id = new_object(a.type.size(), pointsto::incoming_object(f.name, p.name));
    write_leaves(id, a.type, a.values);
    auto& o = objects_[id];
    if (a.taint == ArgSpec::Taint::All) o.taint.assign(o.taint.size(), true);
    if (a.taint == ArgSpec::Taint::Mask)
      for (std::size_t k = 0; k < o.taint.size() && k < a.mask.size(); ++k) o.taint[k] = a.mask[k];
    if (a.tainted()) note_object_taint(id);
    arg_objects_.push_back(id);
    Val v;
    v.ptr = true;
    v.obj = id;
    return v;
  }

  void collect_outputs() {
    for (auto id : arg_objects_) out_.outputs.arg_objects.push_back(objects_[id].bytes);
    for (auto id : global_order_) out_.outputs.globals.push_back(objects_[id].bytes);
  }

  // -- memory --------------------------------------------------------------

  static void write_int(Object& o, std::uint64_t off, std::uint64_t size, std::uint64_t v) {
    for (std::uint64_t k = 0; k < size; ++k) o.bytes[off + k] = static_cast<std::uint8_t>(v >> (8 * k));
  }
  static std::uint64_t read_int(const Object& o, std::uint64_t off, std::uint64_t size) {
    std::uint64_t v = 0;
    for (std::uint64_t k = 0; k < size; ++k) v |= std::uint64_t{o.bytes[off + k]} << (8 * k);
    return v;
  }

  static std::uint64_t encode_ptr(const Val& v) {
    if (v.obj == kNoObject) return 0;
    if (v.off < 0 || v.off > std::numeric_limits<std::int32_t>::max())
      throw TrapSignal{"address offset out of encodable range"};
    return (std::uint64_t{v.obj + 1} << 32) | static_cast<std::uint32_t>(v.off);
  }
  static Val decode_ptr(std::uint64_t bits) {
    Val v;
    v.ptr = true;
    std::uint64_t hi = bits >> 32;
    v.obj = hi == 0 ? kNoObject : static_cast<std::uint32_t>(hi - 1);
    v.off = static_cast<std::int64_t>(bits & 0xffffffffu);
    return v;
  }

  Object& checked(const Val& addr, std::uint64_t size, const char* what) {
    if (!addr.ptr || addr.obj == kNoObject || addr.obj >= objects_.size())
      throw TrapSignal{std::string(what) + " through an invalid address"};
    Object& o = objects_[addr.obj];
    if (!o.live) throw TrapSignal{std::string(what) + " of a dead stack object"};
    if (addr.off < 0 || static_cast<std::uint64_t>(addr.off) + size > o.bytes.size())
      throw TrapSignal{std::string("out-of-bounds ") + what + " at offset " +
                       std::to_string(addr.off) + " of a " + std::to_string(o.bytes.size()) +
                       "-byte object"};
    return o;
  }

  void note_object_taint(std::uint32_t id) {
    if (config_.observe) out_.observations.tainted_objects.insert(objects_[id].site);
  }

  // -- frames --------------------------------------------------------------

  ir::InstId current_id() const {
    if (stack_.empty()) return {};
    const Frame& f = stack_.back();
    return ir::InstId{f.fn->name, f.fn->blocks[f.block].label, f.ip};
  }

  void define(Frame& f, const std::string& name, Val v) {
    if (config_.observe) {
      std::string key = ir::value_key(f.fn->name, name);
      if (v.taint) out_.observations.tainted_values.insert(key);
      if (v.ptr && v.obj != kNoObject && v.obj < objects_.size())
        out_.observations.pointer_targets.emplace(key, objects_[v.obj].site);
    }
    f.env[name] = v;
  }

  void push_frame(const ir::Function& fn, const std::vector<Val>& args,
                  std::optional<std::string> result) {
    if (stack_.size() >= config_.max_call_depth) throw TrapSignal{"call depth limit exceeded"};
    Frame f;
    f.fn = &fn;
    f.result_in_caller = std::move(result);
    for (std::size_t i = 0; i < fn.params.size(); ++i) define(f, fn.params[i].name, args[i]);
    stack_.push_back(std::move(f));
  }

  void warn(const ir::InstId& id, policy::Category c) { out_.report.add(Warning{id, c, out_.steps}); }

  Val operand(const Frame& f, const ir::Operand& op, const ir::Type& type) const {
    if (auto v = std::get_if<ir::ValueRef>(&op)) {
      auto it = f.env.find(v->name);
      if (it == f.env.end()) throw TrapSignal{"read of undefined value %" + v->name};
      return it->second;
    }
    if (auto g = std::get_if<ir::GlobalRef>(&op)) {
      Val p;
      p.ptr = true;
      p.obj = globals_.at(g->name);
      return p;
    }
    Val c;
    c.bits = static_cast<std::uint64_t>(std::get<ir::Const>(op).value) & width_mask(type.bits());
    return c;
  }

  std::optional<ir::Type> operand_type(const Frame& f, const ir::Operand& op) const {
    if (auto v = std::get_if<ir::ValueRef>(&op)) {
      if (const ir::Param* p = f.fn->find_param(v->name)) return p->type;
      auto it = types_.find(ir::value_key(f.fn->name, v->name));
      if (it != types_.end()) return it->second;
    }
    return std::nullopt;
  }

  void jump(Frame& f, const std::string& label) {
    std::size_t from = f.block;
    f.block = *f.fn->block_index(label);
    f.ip = 0;
    // Phis read their inputs before any of them is written.
    const auto& insts = f.fn->blocks[f.block].insts;
    const std::string& pred = f.fn->blocks[from].label;
    std::vector<std::pair<std::string, Val>> pending;
    while (f.ip < insts.size() && insts[f.ip].op == ir::Opcode::Phi) {
      const auto& phi = insts[f.ip];
      ++out_.steps;
      std::size_t k = 0;
      while (k < phi.labels.size() && phi.labels[k] != pred) ++k;
      if (k == phi.labels.size()) throw TrapSignal{"phi has no incoming value for '" + pred + "'"};
      pending.emplace_back(*phi.result, operand(f, phi.operands[k], phi.type));
      ++f.ip;
    }
    for (auto& [name, v] : pending) define(f, name, v);
  }

  // -- instructions --------------------------------------------------------

  void step() {
    Frame& f = stack_.back();
    const ir::Block& blk = f.fn->blocks[f.block];
    const ir::Instruction& inst = blk.insts[f.ip];
    const ir::InstId id{f.fn->name, blk.label, f.ip};
    ++out_.steps;
    const auto& ops = inst.operands;
    switch (inst.op) {
      case ir::Opcode::Alloca: {
        std::uint32_t obj = new_object(inst.type.size() * inst.count, id.str());
        f.allocas.push_back(obj);
        Val p;
        p.ptr = true;
        p.obj = obj;
        define(f, *inst.result, p);
        ++f.ip;
        break;
      }
      case ir::Opcode::Load: {
        Val addr = operand(f, ops[0], ir::Type::ptr());
        if (addr.taint) warn(id, policy::Category::MemLoad);
        const std::uint64_t size = inst.type.size();
        Object& o = checked(addr, size, "load");
        if (config_.observe) out_.observations.loads.emplace(id, o.site);
        Val v;
        bool t = addr.taint;
        for (std::uint64_t k = 0; k < size; ++k) t = t || o.taint[addr.off + k];
        std::uint64_t raw = read_int(o, addr.off, size);
        if (inst.type.is_ptr()) {
          v = decode_ptr(raw);
        } else {
          v.bits = raw & width_mask(inst.type.bits());
        }
        v.taint = t;
        define(f, *inst.result, v);
        ++f.ip;
        break;
      }
      case ir::Opcode::Store: {
        Val val = operand(f, ops[0], inst.type);
        Val addr = operand(f, ops[1], ir::Type::ptr());
        if (addr.taint) warn(id, policy::Category::MemStore);
        const std::uint64_t size = inst.type.size();
        Object& o = checked(addr, size, "store");
        std::uint64_t raw;
        if (inst.type.is_ptr()) {
          raw = encode_ptr(val);
          if (config_.observe && val.obj != kNoObject && val.obj < objects_.size())
            out_.observations.content_targets.emplace(o.site, objects_[val.obj].site);
        } else {
          raw = val.bits;
        }
        write_int(o, addr.off, size, raw);
        bool t = val.taint || addr.taint;
        for (std::uint64_t k = 0; k < size; ++k) o.taint[addr.off + k] = t;
        if (config_.observe) {
          out_.observations.stores.emplace(id, o.site);
          if (t) out_.observations.tainted_objects.insert(o.site);
        }
        ++f.ip;
        break;
      }
      case ir::Opcode::Addr: {
        Val base = operand(f, ops[0], ir::Type::ptr());
        Val r = base;
        const ir::Type* cur = &inst.type;
        for (std::size_t k = 1; k < ops.size(); ++k) {
          auto ty = operand_type(f, ops[k]).value_or(ir::Type::i64());
          Val idx = operand(f, ops[k], ty);
          std::int64_t n = sign_extend(idx.bits, ty.bits());
          r.taint = r.taint || idx.taint;
          if (k == 1) {
            r.off += n * static_cast<std::int64_t>(cur->size());
          } else if (cur->kind == ir::Type::Kind::Array) {
            cur = &cur->elems[0];
            r.off += n * static_cast<std::int64_t>(cur->size());
          } else {
            r.off += static_cast<std::int64_t>(cur->field_offset(static_cast<std::size_t>(n)));
            cur = &cur->elems[static_cast<std::size_t>(n)];
          }
        }
        define(f, *inst.result, r);
        ++f.ip;
        break;
      }
      case ir::Opcode::Binop: {
        Val a = operand(f, ops[0], inst.type);
        Val b = operand(f, ops[1], inst.type);
        if (config_.check_varlat && ir::is_division(inst.binop) && (a.taint || b.taint))
          warn(id, policy::Category::Varlat);
        Val r;
        r.bits = binop(inst.binop, a.bits, b.bits, inst.type.bits());
        r.taint = a.taint || b.taint;
        define(f, *inst.result, r);
        ++f.ip;
        break;
      }
      case ir::Opcode::Icmp: {
        Val a = operand(f, ops[0], inst.type);
        Val b = operand(f, ops[1], inst.type);
        Val r;
        r.bits = compare(inst, a, b) ? 1 : 0;
        r.taint = a.taint || b.taint;
        define(f, *inst.result, r);
        ++f.ip;
        break;
      }
      case ir::Opcode::Select: {
        Val c = operand(f, ops[0], ir::Type::i1());
        Val chosen = operand(f, ops[(c.bits & 1) ? 1 : 2], inst.type);
        chosen.taint = chosen.taint || c.taint;
        define(f, *inst.result, chosen);
        ++f.ip;
        break;
      }
      case ir::Opcode::Cast: {
        Val v = operand(f, ops[0], inst.type);
        if (inst.to_type.is_int()) {
          unsigned from = inst.type.bits(), to = inst.to_type.bits();
          std::uint64_t x = v.bits & width_mask(from);
          if (to > from && from > 1) x = static_cast<std::uint64_t>(sign_extend(x, from));
          v.bits = x & width_mask(to);
        }
        define(f, *inst.result, v);
        ++f.ip;
        break;
      }
      case ir::Opcode::Phi: throw TrapSignal{"phi executed outside block entry"};
      case ir::Opcode::Call: call(f, inst, id); break;
      case ir::Opcode::Br: {
        Val c = operand(f, ops[0], ir::Type::i1());
        if (c.taint) warn(id, policy::Category::Branch);
        jump(f, inst.labels[(c.bits & 1) ? 0 : 1]);
        break;
      }
      case ir::Opcode::Jmp: jump(f, inst.labels[0]); break;
      case ir::Opcode::Ret: {
        std::optional<Val> rv;
        if (!ops.empty()) rv = operand(f, ops[0], f.fn->ret);
        for (auto obj : f.allocas) objects_[obj].live = false;
        auto result = f.result_in_caller;
        stack_.pop_back();
        if (stack_.empty()) {
          if (rv) {
            out_.outputs.return_value = rv->ptr ? encode_ptr(*rv) : rv->bits;
            out_.return_tainted = rv->taint;
          }
        } else {
          Frame& caller = stack_.back();
          if (result && rv) define(caller, *result, *rv);
          ++caller.ip;
        }
        break;
      }
    }
  }

  static std::uint64_t binop(ir::BinOp op, std::uint64_t a, std::uint64_t b, unsigned bits) {
    const std::uint64_t mask = width_mask(bits);
    a &= mask;
    b &= mask;
    const std::int64_t sa = sign_extend(a, bits), sb = sign_extend(b, bits);
    const std::int64_t smin = bits >= 64 ? std::numeric_limits<std::int64_t>::min()
                                         : -(std::int64_t{1} << (bits - 1));
    switch (op) {
      case ir::BinOp::Add: return (a + b) & mask;
      case ir::BinOp::Sub: return (a - b) & mask;
      case ir::BinOp::Mul: return (a * b) & mask;
      case ir::BinOp::And: return a & b;
      case ir::BinOp::Or: return a | b;
      case ir::BinOp::Xor: return a ^ b;
      case ir::BinOp::Udiv:
      case ir::BinOp::Urem:
        if (b == 0) throw TrapSignal{"division by zero"};
        return (op == ir::BinOp::Udiv ? a / b : a % b) & mask;
      case ir::BinOp::Sdiv:
      case ir::BinOp::Srem:
        if (b == 0) throw TrapSignal{"division by zero"};
        if (bits > 1 && sa == smin && sb == -1) throw TrapSignal{"signed division overflow"};
        if (bits == 1) return op == ir::BinOp::Sdiv ? a : 0;
        return static_cast<std::uint64_t>(op == ir::BinOp::Sdiv ? sa / sb : sa % sb) & mask;
      case ir::BinOp::Shl:
      case ir::BinOp::Lshr:
      case ir::BinOp::Ashr:
        if (b >= bits) throw TrapSignal{"shift amount out of range"};
        if (op == ir::BinOp::Shl) return (a << b) & mask;
        if (op == ir::BinOp::Lshr) return a >> b;
        return static_cast<std::uint64_t>(sa >> b) & mask;
    }
    return 0;
  }

  static bool compare(const ir::Instruction& inst, const Val& a, const Val& b) {
    if (inst.type.is_ptr()) {
      bool eq = a.obj == b.obj && (a.obj == kNoObject || a.off == b.off);
      return inst.pred == ir::Pred::Eq ? eq : !eq;
    }
    const unsigned bits = inst.type.bits();
    const std::int64_t sa = sign_extend(a.bits, bits), sb = sign_extend(b.bits, bits);
    const std::uint64_t ua = a.bits & width_mask(bits), ub = b.bits & width_mask(bits);
    switch (inst.pred) {
      case ir::Pred::Eq: return ua == ub;
      case ir::Pred::Ne: return ua != ub;
      case ir::Pred::Slt: return sa < sb;
      case ir::Pred::Sle: return sa <= sb;
      case ir::Pred::Sgt: return sa > sb;
      case ir::Pred::Sge: return sa >= sb;
      case ir::Pred::Ult: return ua < ub;
      case ir::Pred::Ule: return ua <= ub;
      case ir::Pred::Ugt: return ua > ub;
      case ir::Pred::Uge: return ua >= ub;
    }
    return false;
  }

  // -- calls ---------------------------------------------------------------

  void call(Frame& f, const ir::Instruction& inst, const ir::InstId& id) {
    if (const ir::Function* callee = m_.find_function(inst.callee)) {
      std::vector<Val> args;
      for (std::size_t k = 0; k < inst.operands.size(); ++k)
        args.push_back(operand(f, inst.operands[k], callee->params[k].type));
      push_frame(*callee, args, inst.result);
      return;
    }
    const ir::Extern* ext = m_.find_extern(inst.callee);
    if (!ext) throw TrapSignal{"unknown call target '" + inst.callee + "'"};
    std::vector<Val> args;
    for (std::size_t k = 0; k < inst.operands.size(); ++k)
      args.push_back(operand(f, inst.operands[k], ext->params[k]));
    bool tainted_input = false;
    for (const auto& a : args) tainted_input = tainted_input || a.taint;
    std::optional<Val> result = run_stub(*ext, args, id, tainted_input);
    if (tainted_input) warn(id, policy::Category::ExternCall);
    if (inst.result) {
      if (!result) throw TrapSignal{"extern '" + ext->name + "' produced no value"};
      define(f, *inst.result, *result);
    }
    ++f.ip;
  }

  /// Registered library stubs. `tainted_input` is raised when the stub reads
  /// tainted memory.
  std::optional<Val> run_stub(const ir::Extern& ext, const std::vector<Val>& args,
                              const ir::InstId& id, bool& tainted_input) {
    const std::string& n = ext.name;
    auto sig_is = [&](std::initializer_list<ir::Type::Kind> params, ir::Type::Kind ret) {
      if (ext.params.size() != params.size() || ext.ret.kind != ret) return false;
      std::size_t i = 0;
      for (auto k : params)
        if (ext.params[i++].kind != k) return false;
      return true;
    };
    auto bad_sig = [&]() -> TrapSignal { return TrapSignal{"extern '" + n + "' has an unsupported signature"}; };

    if (n == "min" || n == "max") {
      if (ext.params.size() != 2 || !ext.params[0].is_int() || ext.params[0] != ext.params[1] ||
          ext.ret != ext.params[0])
        throw bad_sig();
      const unsigned bits = ext.ret.bits();
      std::int64_t a = sign_extend(args[0].bits, bits), b = sign_extend(args[1].bits, bits);
      bool pick_a = n == "min" ? a <= b : a >= b;
      Val r = pick_a ? args[0] : args[1];
      r.taint = args[0].taint || args[1].taint;
      return r;
    }
    if (n == "memcpy") {
      using K = ir::Type::Kind;
      if (!sig_is({K::Ptr, K::Ptr, K::I64}, K::Void)) throw bad_sig();
      std::uint64_t len = args[2].bits;
      Object& src = checked(args[1], len, "memcpy read");
      std::vector<std::uint8_t> bytes(src.bytes.begin() + args[1].off,
                                      src.bytes.begin() + args[1].off + static_cast<std::int64_t>(len));
      std::vector<bool> taint(src.taint.begin() + args[1].off,
                              src.taint.begin() + args[1].off + static_cast<std::int64_t>(len));
      for (bool t : taint) tainted_input = tainted_input || t;
      Object& dst = checked(args[0], len, "memcpy write");
      const bool extra = args[0].taint || args[1].taint || args[2].taint;
      bool any = false;
      for (std::uint64_t k = 0; k < len; ++k) {
        dst.bytes[args[0].off + k] = bytes[k];
        dst.taint[args[0].off + k] = taint[k] || extra;
        any = any || taint[k] || extra;
      }
      if (config_.observe) {
        out_.observations.loads.emplace(id, src.site);
        out_.observations.stores.emplace(id, dst.site);
        if (any) out_.observations.tainted_objects.insert(dst.site);
      }
      return std::nullopt;
    }
    if (n == "malloc") {
      using K = ir::Type::Kind;
      if (!sig_is({K::I64}, K::Ptr)) throw bad_sig();
      if (args[0].bits > (1u << 20)) throw TrapSignal{"malloc size too large"};
      Val p;
      p.ptr = true;
      p.obj = new_object(args[0].bits, id.str());
      p.taint = args[0].taint;
      return p;
    }
    if (n == "print") {
      if (!ext.ret.is_void()) throw bad_sig();
      return std::nullopt;
    }
    throw TrapSignal{"no stub registered for extern '" + n + "'"};
  }

  const ir::Module& m_;
  const RunConfig& config_;
  RunResult& out_;
  std::vector<Object> objects_;
  std::unordered_map<std::string, std::uint32_t> globals_;
  std::vector<std::uint32_t> global_order_;
  std::vector<std::uint32_t> arg_objects_;
  std::vector<Frame> stack_;
  std::unordered_map<std::string, ir::Type> types_;

 public:
  void index_types() {
    for (const auto& fn : m_.functions)
      for (const auto& b : fn.blocks)
        for (const auto& i : b.insts)
          if (i.result) types_.emplace(ir::value_key(fn.name, *i.result), i.result_type());
  }
};

}  // namespace

RunResult run(const ir::Module& m, const Harness& h, const RunConfig& config) {
  auto errs = check_harness(m, h);
  if (!errs.empty()) throw HarnessError(errs.front());
  Harness concrete = materialize(h);
  RunResult out;
  Machine machine(m, config, out);
  machine.index_types();
  machine.run(concrete);
  return out;
}

std::string format_warning(const Warning& w) {
  return "WARN " + std::string(policy::category_name(w.category)) + " " + w.id.str() +
         " step=" + std::to_string(w.step);
}

}  // namespace oblint::dynoracle
