#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oblint/cloning.hpp"
#include "oblint/ir.hpp"
#include "oblint/policy.hpp"

namespace oblint::dynoracle {

// ---------------------------------------------------------------------------
// Harness
// ---------------------------------------------------------------------------

struct Generator {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

/// One entry-function argument. For a scalar parameter `type` is the value
/// type; for a pointer parameter it is the type of a fresh object the
/// argument will point to.
struct ArgSpec {
  ir::Type type;
  /// Leaf scalars in layout order. Empty with a generator: generated.
  std::vector<std::int64_t> values;
  std::optional<Generator> generator;
  enum class Taint { None, All, Mask };
  Taint taint = Taint::None;
  /// Per-byte taint when taint == Mask.
  std::vector<bool> mask;

  bool tainted() const;
};

struct Harness {
  std::string entry;
  std::vector<ArgSpec> args;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 1'000'000;
};

class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the JSON harness format; throws HarnessError.
Harness parse_harness(std::string_view text);
Harness load_harness(const std::filesystem::path& path);
std::string harness_to_json(const Harness& h);

/// Problems that prevent running `h` against `m` (empty when runnable).
std::vector<std::string> check_harness(const ir::Module& m, const Harness& h);

/// Replaces generators with concrete values drawn from `h.seed`.
Harness materialize(const Harness& h);

/// Same harness with every taint marking removed.
Harness without_taint(const Harness& h);

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct Warning {
  ir::InstId id;
  policy::Category category = policy::Category::Branch;
  std::uint64_t step = 0;
};

using Finding = std::pair<ir::InstId, policy::Category>;

struct DynReport {
  std::vector<Warning> raw;
  std::set<Finding> dedup;

  void add(Warning w) {
    dedup.emplace(w.id, w.category);
    raw.push_back(std::move(w));
  }
};

struct Trap {
  ir::InstId at;
  std::string message;
};

/// Facts collected during a run for soundness checks against the static side.
struct Observations {
  std::set<std::string> tainted_values;
  std::set<std::string> tainted_objects;
  /// (value key, site id) for every address value defined.
  std::set<std::pair<std::string, std::string>> pointer_targets;
  /// (container site, pointee site) for every address stored in memory.
  std::set<std::pair<std::string, std::string>> content_targets;
  std::set<std::pair<ir::InstId, std::string>> loads;
  std::set<std::pair<ir::InstId, std::string>> stores;
};

/// Concrete results, without taint.
struct Outputs {
  std::optional<std::uint64_t> return_value;
  /// Final bytes of each object handed to the entry function, in argument order.
  std::vector<std::vector<std::uint8_t>> arg_objects;
  /// Final bytes of each global, in declaration order.
  std::vector<std::vector<std::uint8_t>> globals;
  friend bool operator==(const Outputs&, const Outputs&) = default;
};

struct RunConfig {
  bool check_varlat = false;
  bool observe = false;
  /// Overrides the harness step limit when nonzero.
  std::uint64_t max_steps = 0;
  std::size_t max_call_depth = 4096;
};

struct RunResult {
  Outputs outputs;
  bool return_tainted = false;
  DynReport report;
  std::optional<Trap> trap;
  Observations observations;
  std::uint64_t steps = 0;
};

/// Executes `h` on `m`. Blinded globals start tainted; harness markings taint
/// arguments. Generators are resolved first. Throws HarnessError when the
/// harness does not fit the module.
RunResult run(const ir::Module& m, const Harness& h, const RunConfig& config = {});

std::string format_warning(const Warning& w);

// ---------------------------------------------------------------------------
// Differential check
// ---------------------------------------------------------------------------

struct Verdict {
  bool pass = true;
  /// Deduplicated dynamic findings missing from the static report.
  std::vector<Finding> escaping;
};

/// Every deduplicated dynamic finding, mapped to original functions through
/// `clone_map`, must appear in `static_report`.
Verdict subset_check(const policy::ViolationReport& static_report, const DynReport& dyn,
                     const cloning::CloneRegistry& clone_map = {});

}  // namespace oblint::dynoracle
