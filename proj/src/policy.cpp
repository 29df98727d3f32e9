#include "oblint/policy.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace oblint::policy {

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Branch: return "branch";
    case Category::MemLoad: return "mem-load";
    case Category::MemStore: return "mem-store";
    case Category::Varlat: return "varlat";
    case Category::ExternCall: return "extern-call";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view s) {
  for (auto c : {Category::Branch, Category::MemLoad, Category::MemStore, Category::Varlat,
                 Category::ExternCall})
    if (category_name(c) == s) return c;
  return std::nullopt;
}

bool ViolationReport::contains(const ir::InstId& loc, Category c) const {
  for (const auto& v : violations)
    if (v.location == loc && v.category == c) return true;
  return false;
}

namespace {

class Checker {
 public:
  Checker(const ir::Module& m, const taint::TaintState& taint, const taint::TaintTrace& trace,
          const pointsto::PointsToMap& pts, const cloning::CloneRegistry& reg,
          const PolicyConfig& config)
      : m_(m), taint_(taint), trace_(trace), pts_(pts), reg_(reg), config_(config) {}

  ViolationReport run() {
    for (const auto& f : m_.functions)
      for (const auto& b : f.blocks)
        for (std::size_t i = 0; i < b.insts.size(); ++i) check(f, b, i);

    // Order by position of the original function, then block, then index.
    std::map<std::string, std::size_t> fn_pos;
    for (std::size_t i = 0; i < m_.functions.size(); ++i) fn_pos.emplace(m_.functions[i].name, i);
    auto key = [&](const Violation& v) {
      const ir::Function* f = m_.find_function(v.location.function);
      std::size_t bpos = f ? f->block_index(v.location.block).value_or(0) : 0;
      return std::make_tuple(fn_pos[v.location.function], bpos, v.location.index,
                             static_cast<int>(v.category));
    };
    std::stable_sort(found_.begin(), found_.end(),
                     [&](const Violation& a, const Violation& b) { return key(a) < key(b); });

    ViolationReport out;
    for (auto& v : found_) {
      if (out.contains(v.location, v.category)) continue;
      switch (v.category) {
        case Category::Branch: ++out.summary.branch; break;
        case Category::MemLoad: ++out.summary.mem_load; break;
        case Category::MemStore: ++out.summary.mem_store; break;
        case Category::Varlat: ++out.summary.varlat; break;
        case Category::ExternCall: ++out.summary.extern_call; break;
      }
      out.violations.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::string key_of(const ir::Function& f, const ir::Operand& op) const {
    if (auto v = std::get_if<ir::ValueRef>(&op)) return ir::value_key(f.name, v->name);
    if (auto g = std::get_if<ir::GlobalRef>(&op)) return ir::global_key(g->name);
    return {};
  }

  /// Trace of the operand when its value is tainted.
  std::optional<std::vector<vfg::Node>> tainted_value(const ir::Function& f,
                                                      const ir::Operand& op) const {
    std::string k = key_of(f, op);
    if (k.empty() || !taint_.value_tainted(k)) return std::nullopt;
    vfg::Node n{vfg::Node::Kind::Value, k};
    const auto* p = trace_.path_to(n);
    return p ? *p : std::vector<vfg::Node>{n};
  }

  /// Trace of the first tainted object the operand may point to.
  std::optional<std::vector<vfg::Node>> tainted_pointee(const ir::Function& f,
                                                        const ir::Operand& op) const {
    std::string k = key_of(f, op);
    if (k.empty()) return std::nullopt;
    for (const auto& o : pts_.of(k)) {
      if (!taint_.object_tainted(o)) continue;
      vfg::Node n{vfg::Node::Kind::Object, o};
      const auto* p = trace_.path_to(n);
      return p ? *p : std::vector<vfg::Node>{n};
    }
    return std::nullopt;
  }

  void report(const ir::InstId& id, Category c, std::vector<vfg::Node> trace) {
    found_.push_back(Violation{reg_.to_original(id), id, c, std::move(trace)});
  }

  void check(const ir::Function& f, const ir::Block& b, std::size_t i) {
    const auto& inst = b.insts[i];
    const ir::InstId id{f.name, b.label, i};
    switch (inst.op) {
      case ir::Opcode::Br:
        if (config_.suppress_branch_check) break;
        if (auto t = tainted_value(f, inst.operands[0])) report(id, Category::Branch, *t);
        break;
      case ir::Opcode::Load:
        if (auto t = tainted_value(f, inst.operands[0])) report(id, Category::MemLoad, *t);
        break;
      case ir::Opcode::Store:
        if (auto t = tainted_value(f, inst.operands[1])) report(id, Category::MemStore, *t);
        break;
      case ir::Opcode::Binop:
        if (!config_.check_varlat || !ir::is_division(inst.binop)) break;
        for (const auto& op : inst.operands)
          if (auto t = tainted_value(f, op)) {
            report(id, Category::Varlat, *t);
            break;
          }
        break;
      case ir::Opcode::Call:
        if (!m_.find_extern(inst.callee)) break;
        for (const auto& op : inst.operands) {
          auto t = tainted_value(f, op);
          if (!t) t = tainted_pointee(f, op);
          if (t) {
            report(id, Category::ExternCall, *t);
            break;
          }
        }
        break;
      default: break;
    }
  }

  const ir::Module& m_;
  const taint::TaintState& taint_;
  const taint::TaintTrace& trace_;
  const pointsto::PointsToMap& pts_;
  const cloning::CloneRegistry& reg_;
  const PolicyConfig& config_;
  std::vector<Violation> found_;
};

}  // namespace

ViolationReport validate(const ir::Module& m, const taint::TaintState& taint,
                         const taint::TaintTrace& trace, const pointsto::PointsToMap& pts,
                         const cloning::CloneRegistry& registry, const PolicyConfig& config) {
  return Checker(m, taint, trace, pts, registry, config).run();
}

}  // namespace oblint::policy
