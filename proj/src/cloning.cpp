#include "oblint/cloning.hpp"

#include <set>
#include <stdexcept>

namespace oblint::cloning {

bool TaintSignature::clear() const {
  for (const auto& p : params)
    if (!p.clear()) return false;
  return true;
}

TaintSignature TaintSignature::merged(const TaintSignature& other) const {
  if (other.params.size() != params.size())
    throw std::invalid_argument("merging signatures of different arity");
  TaintSignature out = *this;
  for (std::size_t i = 0; i < params.size(); ++i) {
    out.params[i].by_value |= other.params[i].by_value;
    out.params[i].pointee |= other.params[i].pointee;
  }
  return out;
}

std::string TaintSignature::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) s += ", ";
    const auto& p = params[i];
    if (p.clear())
      s += "clear";
    else if (p.by_value && p.pointee)
      s += "by-value+pointee";
    else
      s += p.by_value ? "by-value" : "pointee";
  }
  return s + "]";
}

const std::string& CloneRegistry::original_of(const std::string& name) const {
  auto it = origin_.find(name);
  return it == origin_.end() ? name : it->second;
}

TaintSignature CloneRegistry::signature_of(const std::string& name, std::size_t params) const {
  auto it = signature_.find(name);
  return it == signature_.end() ? TaintSignature::clear_for(params) : it->second;
}

const std::string* CloneRegistry::lookup(const std::string& original,
                                         const TaintSignature& sig) const {
  auto it = clones_.find({original, sig});
  return it == clones_.end() ? nullptr : &it->second;
}

std::string CloneRegistry::add(const std::string& original, const TaintSignature& sig) {
  std::string name = original + "#" + std::to_string(++counter_[original]);
  clones_.emplace(std::make_pair(original, sig), name);
  origin_.emplace(name, original);
  signature_.emplace(name, sig);
  return name;
}

std::size_t CloneRegistry::clone_count(const std::string& original) const {
  auto it = counter_.find(original);
  return it == counter_.end() ? 0 : it->second;
}

std::string CloneRegistry::to_original(const std::string& key) const {
  std::size_t start = !key.empty() && key[0] == '$' ? 1 : 0;
  std::size_t colon = key.find(':', start);
  if (colon == std::string::npos) return key;
  std::string fn = key.substr(start, colon - start);
  auto it = origin_.find(fn);
  if (it == origin_.end()) return key;
  return key.substr(0, start) + it->second + key.substr(colon);
}

ir::InstId CloneRegistry::to_original(const ir::InstId& id) const {
  ir::InstId out = id;
  out.function = original_of(id.function);
  return out;
}

taint::TaintState CloneRegistry::to_original(const taint::TaintState& state) const {
  taint::TaintState out;
  for (const auto& v : state.values) out.values.insert(to_original(v));
  for (const auto& o : state.objects) out.objects.insert(to_original(o));
  return out;
}

TaintSignature signature_at(const ir::Module& m, const ir::InstId& call,
                            const taint::TaintState& taint, const pointsto::PointsToMap& pts) {
  const ir::Instruction* inst = m.at(call);
  if (!inst || inst->op != ir::Opcode::Call)
    throw std::invalid_argument(call.str() + " is not a call instruction");
  TaintSignature sig = TaintSignature::clear_for(inst->operands.size());
  for (std::size_t k = 0; k < inst->operands.size(); ++k) {
    std::string key;
    if (auto v = std::get_if<ir::ValueRef>(&inst->operands[k]))
      key = ir::value_key(call.function, v->name);
    else if (auto g = std::get_if<ir::GlobalRef>(&inst->operands[k]))
      key = ir::global_key(g->name);
    else
      continue;
    sig.params[k].by_value = taint.value_tainted(key);
    for (const auto& o : pts.of(key))
      if (taint.object_tainted(o)) {
        sig.params[k].pointee = true;
        break;
      }
  }
  return sig;
}

namespace {

ir::Function make_clone(const ir::Function& original, const std::string& name,
                        const TaintSignature& sig, const CloneRegistry& reg) {
  ir::Function f = original;
  f.name = name;
  // Start from the original's untouched call targets; the clone's own
  // context decides them in later rounds.
  for (auto& b : f.blocks)
    for (auto& inst : b.insts)
      if (inst.op == ir::Opcode::Call) inst.callee = reg.original_of(inst.callee);
  // Pointee taint reaches the clone through shared memory; only by-value
  // taint of scalar parameters is recorded as an annotation.
  for (std::size_t k = 0; k < f.params.size(); ++k)
    if (sig.params[k].by_value && !f.params[k].type.is_ptr()) f.params[k].blinded = true;
  return f;
}

}  // namespace

CloneRound clone_round(const ir::Module& m, const taint::TaintState& taint,
                       const CloneRegistry& reg, const pointsto::PointsToMap& pts,
                       std::size_t clone_budget) {
  CloneRound out{m, reg, false, {}};

  struct Candidate {
    std::size_t fi, bi, i;
    std::string target;
    TaintSignature wanted;
  };
  std::vector<Candidate> candidates;
  for (std::size_t fi = 0; fi < m.functions.size(); ++fi) {
    const auto& fn = m.functions[fi];
    for (std::size_t bi = 0; bi < fn.blocks.size(); ++bi) {
      for (std::size_t i = 0; i < fn.blocks[bi].insts.size(); ++i) {
        const auto& inst = fn.blocks[bi].insts[i];
        if (inst.op != ir::Opcode::Call) continue;
        const ir::Function* target = m.find_function(inst.callee);
        if (!target) continue;  // extern
        if (reg.insensitive(reg.original_of(target->name))) continue;
        TaintSignature current = reg.signature_of(target->name, target->params.size());
        TaintSignature wanted =
            signature_at(m, ir::InstId{fn.name, fn.blocks[bi].label, i}, taint, pts).merged(current);
        if (wanted.clear() || wanted == current) continue;
        candidates.push_back({fi, bi, i, target->name, std::move(wanted)});
      }
    }
  }

  // A function whose callers are being retargeted this round still carries
  // taint merged from all of them. Its own call sites wait for the next
  // round, unless nothing else can move.
  std::set<std::string> unsettled;
  for (const auto& c : candidates)
    if (m.functions[c.fi].name != c.target) unsettled.insert(c.target);
  std::vector<const Candidate*> ready;
  for (const auto& c : candidates)
    if (!unsettled.count(m.functions[c.fi].name)) ready.push_back(&c);
  if (ready.empty())
    for (const auto& c : candidates) ready.push_back(&c);
  if (ready.size() < candidates.size()) out.changed = true;

  for (const Candidate* c : ready) {
    const std::string original = out.registry.original_of(c->target);
    const ir::InstId id{m.functions[c->fi].name, m.functions[c->fi].blocks[c->bi].label, c->i};
    if (out.registry.insensitive(original)) continue;
    std::string clone;
    if (const std::string* found = out.registry.lookup(original, c->wanted)) {
      clone = *found;
    } else if (out.registry.clone_count(original) >= clone_budget) {
      out.registry.mark_insensitive(original);
      ir::Diagnostic d;
      d.severity = ir::Diagnostic::Severity::Warning;
      d.inst = id;
      d.message = "clone budget of " + std::to_string(clone_budget) + " exhausted for '" +
                  original + "'; analysing it context-insensitively";
      out.diagnostics.push_back(std::move(d));
      continue;
    } else {
      const ir::Function* orig_fn = m.find_function(original);
      if (!orig_fn) throw std::logic_error("original function '" + original + "' missing");
      clone = out.registry.add(original, c->wanted);
      out.module.functions.push_back(make_clone(*orig_fn, clone, c->wanted, out.registry));
    }
    out.module.functions[c->fi].blocks[c->bi].insts[c->i].callee = clone;
    out.changed = true;
  }
  return out;
}

Analysis analyze_to_fixpoint(const ir::Module& m, const CloneConfig& config) {
  Analysis a;
  a.module = m;
  for (int round = 1;; ++round) {
    a.rounds = round;
    a.pts = pointsto::analyze(a.module);
    a.graph = vfg::build(a.module, a.pts);
    auto seeds = taint::seed_sources(a.module, a.pts);
    auto prop = taint::propagate(a.graph, seeds.state);
    a.taint = std::move(prop.state);
    a.trace = std::move(prop.trace);
    if (round == 1) a.diagnostics = seeds.diagnostics;
    if (!config.enabled) break;

    auto next = clone_round(a.module, a.taint, a.registry, a.pts, config.clone_budget);
    a.diagnostics.insert(a.diagnostics.end(), next.diagnostics.begin(), next.diagnostics.end());
    if (!next.changed) break;
    if (round >= config.max_rounds) {
      ir::Diagnostic d;
      d.severity = ir::Diagnostic::Severity::Warning;
      d.message = "reached the limit of " + std::to_string(config.max_rounds) +
                  " analysis rounds; cloning frozen";
      a.diagnostics.push_back(std::move(d));
      break;
    }
    a.module = std::move(next.module);
    a.registry = std::move(next.registry);
  }
  return a;
}

}  // namespace oblint::cloning
