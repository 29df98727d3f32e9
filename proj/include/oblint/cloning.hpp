#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oblint/ir.hpp"
#include "oblint/pointsto.hpp"
#include "oblint/taint.hpp"
#include "oblint/vfg.hpp"

namespace oblint::cloning {

struct ParamTaint {
  bool by_value = false;
  bool pointee = false;
  bool clear() const { return !by_value && !pointee; }
  friend auto operator<=>(const ParamTaint&, const ParamTaint&) = default;
};

/// Per-parameter taint of one call site.
struct TaintSignature {
  std::vector<ParamTaint> params;

  static TaintSignature clear_for(std::size_t n) { return {std::vector<ParamTaint>(n)}; }
  bool clear() const;
  /// Flag-wise union; both signatures must have the same length.
  TaintSignature merged(const TaintSignature& other) const;
  /// e.g. "[by-value, clear]" or "[by-value+pointee]".
  std::string str() const;
  friend auto operator<=>(const TaintSignature&, const TaintSignature&) = default;
};

/// Maps (original function, signature) to the clone that serves it.
class CloneRegistry {
 public:
  /// The original a function was cloned from; `name` itself for originals.
  const std::string& original_of(const std::string& name) const;
  /// Signature a clone was made for; all-clear for originals.
  TaintSignature signature_of(const std::string& name, std::size_t params) const;
  bool is_clone(const std::string& name) const { return origin_.count(name) > 0; }

  const std::string* lookup(const std::string& original, const TaintSignature& sig) const;
  std::string add(const std::string& original, const TaintSignature& sig);

  std::size_t clone_count(const std::string& original) const;
  std::size_t total_clones() const { return origin_.size(); }

  void mark_insensitive(const std::string& original) { insensitive_.insert(original); }
  bool insensitive(const std::string& original) const { return insensitive_.count(original) > 0; }

  const std::map<std::pair<std::string, TaintSignature>, std::string>& entries() const {
    return clones_;
  }

  /// Rewrites a key whose prefix (up to the first ':') names a clone so that
  /// it names the original instead. Used for value keys, site ids and InstIds.
  std::string to_original(const std::string& key) const;
  ir::InstId to_original(const ir::InstId& id) const;
  taint::TaintState to_original(const taint::TaintState& state) const;

 private:
  std::map<std::pair<std::string, TaintSignature>, std::string> clones_;
  std::map<std::string, std::size_t> counter_;
  std::map<std::string, std::string> origin_;
  std::map<std::string, TaintSignature> signature_;
  std::set<std::string> insensitive_;
};

struct CloneConfig {
  bool enabled = true;
  int max_rounds = 32;
  std::size_t clone_budget = 64;
};

/// Signature of the call at `call` in `m` under the given taint.
TaintSignature signature_at(const ir::Module& m, const ir::InstId& call,
                            const taint::TaintState& taint, const pointsto::PointsToMap& pts);

struct CloneRound {
  ir::Module module;
  CloneRegistry registry;
  bool changed = false;
  std::vector<ir::Diagnostic> diagnostics;
};

CloneRound clone_round(const ir::Module& m, const taint::TaintState& taint,
                       const CloneRegistry& reg, const pointsto::PointsToMap& pts,
                       std::size_t clone_budget = 64);

/// Final state of the iterated taint-tracking / cloning loop.
struct Analysis {
  ir::Module module;
  pointsto::PointsToMap pts;
  vfg::ValueFlowGraph graph;
  taint::TaintState taint;
  taint::TaintTrace trace;
  CloneRegistry registry;
  int rounds = 0;
  std::vector<ir::Diagnostic> diagnostics;
};

Analysis analyze_to_fixpoint(const ir::Module& m, const CloneConfig& config = {});

}  // namespace oblint::cloning
