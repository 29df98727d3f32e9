#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oblint/ir.hpp"

namespace oblint::pointsto {

/// One abstract memory object per allocation site.
///
/// Site ids:
///   stack   "fn:block:index" of the alloca
///   global  "@name"
///   extern  "fn:block:index" of an extern call returning an address, or
///           "fn:%param" for memory handed to a function from outside the
///           module (the harness, an unknown caller)
struct AbstractObject {
  enum class Kind { Stack, Global, Extern };
  std::string id;
  Kind kind = Kind::Stack;
  friend auto operator<=>(const AbstractObject&, const AbstractObject&) = default;
};

std::string_view kind_name(AbstractObject::Kind k);

/// Inclusion constraint. lhs/rhs name pointer variables (value keys or
/// solver temporaries), except for AddressOf whose rhs is an object id.
struct Constraint {
  enum class Kind {
    AddressOf,  // lhs ⊇ {rhs}
    Copy,       // lhs ⊇ rhs
    Load,       // lhs ⊇ *rhs
    Store,      // *lhs ⊇ rhs
  };
  Kind kind = Kind::Copy;
  std::string lhs;
  std::string rhs;
  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

using ObjectSet = std::set<std::string>;

struct PointsToMap {
  /// Variable -> objects it may point to.
  std::map<std::string, ObjectSet> values;
  /// Object -> objects whose addresses may be stored inside it.
  std::map<std::string, ObjectSet> contents;
  /// Every allocation site known to the module.
  std::map<std::string, AbstractObject> sites;

  const ObjectSet& of(const std::string& var) const;
  const ObjectSet& contents_of(const std::string& object) const;

  friend bool operator==(const PointsToMap& a, const PointsToMap& b) {
    return a.values == b.values && a.contents == b.contents;
  }
};

struct ConstraintSet {
  std::vector<Constraint> constraints;
  std::map<std::string, AbstractObject> sites;
};

/// Object id of the memory a function receives through pointer parameter
/// `param` from outside the analysed call graph.
std::string incoming_object(std::string_view function, std::string_view param);

/// Temporary solver variable carrying extern-call memory effects.
std::string extern_temp(const ir::InstId& call, std::size_t k);

ConstraintSet collect_constraints(const ir::Module& m);

/// Least fixpoint of the inclusion rules. `sites` is copied into the result.
PointsToMap solve(const std::vector<Constraint>& constraints,
                  const std::map<std::string, AbstractObject>& sites = {});

inline PointsToMap analyze(const ir::Module& m) {
  auto cs = collect_constraints(m);
  return solve(cs.constraints, cs.sites);
}

/// `%name -> {site, ...}` lines for every variable, sorted.
std::string dump(const PointsToMap& pts);

}  // namespace oblint::pointsto
