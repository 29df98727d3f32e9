#include "oblint/dynoracle.hpp"

namespace oblint::dynoracle {

Verdict subset_check(const policy::ViolationReport& static_report, const DynReport& dyn,
                     const cloning::CloneRegistry& clone_map) {
  Verdict v;
  std::set<Finding> seen;
  for (const auto& [id, cat] : dyn.dedup) {
    Finding f{clone_map.to_original(id), cat};
    if (!seen.insert(f).second) continue;
    if (!static_report.contains(f.first, f.second)) v.escaping.push_back(f);
  }
  v.pass = v.escaping.empty();
  return v;
}

}  // namespace oblint::dynoracle
