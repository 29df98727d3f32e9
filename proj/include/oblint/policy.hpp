#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oblint/cloning.hpp"

namespace oblint::policy {

enum class Category { Branch, MemLoad, MemStore, Varlat, ExternCall };

std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view s);

struct Violation {
  /// Location in the input program (clones mapped back to their original).
  ir::InstId location;
  /// Where it was found in the analysed module; differs from `location` for clones.
  ir::InstId instance;
  Category category = Category::Branch;
  /// Seed-to-operand path of the offending operand.
  std::vector<vfg::Node> trace;
};

struct Summary {
  std::size_t branch = 0;
  std::size_t mem_load = 0;
  std::size_t mem_store = 0;
  std::size_t varlat = 0;
  std::size_t extern_call = 0;

  std::size_t memory() const { return mem_load + mem_store; }
  std::size_t total() const { return branch + memory() + varlat + extern_call; }
  friend bool operator==(const Summary&, const Summary&) = default;
};

struct ViolationReport {
  std::vector<Violation> violations;
  Summary summary;

  bool empty() const { return violations.empty(); }
  bool contains(const ir::InstId& loc, Category c) const;
};

struct PolicyConfig {
  bool check_varlat = false;
  /// Mutation-testing hook: drops branch checks so the differential check
  /// has something to catch. Never set in production use.
  bool suppress_branch_check = false;
};

ViolationReport validate(const ir::Module& m, const taint::TaintState& taint,
                         const taint::TaintTrace& trace, const pointsto::PointsToMap& pts,
                         const cloning::CloneRegistry& registry, const PolicyConfig& config = {});

inline ViolationReport validate(const cloning::Analysis& a, const PolicyConfig& config = {}) {
  return validate(a.module, a.taint, a.trace, a.pts, a.registry, config);
}

}  // namespace oblint::policy
