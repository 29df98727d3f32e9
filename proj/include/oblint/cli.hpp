#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oblint/cloning.hpp"
#include "oblint/dynoracle.hpp"
#include "oblint/policy.hpp"

namespace oblint::cli {

enum class Format { Text, Json };

struct AnalysisConfig {
  bool cloning = true;
  int max_rounds = 32;
  std::size_t clone_budget = 64;
  bool check_varlat = false;
  Format format = Format::Text;
  bool emit_annotated_ir = false;
  bool dump_graph = false;
  /// Mutation-testing hook, see policy::PolicyConfig.
  bool suppress_branch_check = false;

  cloning::CloneConfig clone_config() const;
  policy::PolicyConfig policy_config() const;
};

enum ExitCode { kClean = 0, kFindings = 1, kError = 2 };

/// Reads, parses and validates a module. Diagnostics go to `err`.
std::optional<ir::Module> load_module(const std::filesystem::path& path, std::ostream& err);

std::string report_text(const policy::ViolationReport& r);
std::string report_json(const policy::ViolationReport& r, const std::string& module_name,
                        const AnalysisConfig& config);

struct StaticResult {
  cloning::Analysis analysis;
  policy::ViolationReport report;
};

StaticResult analyze(const ir::Module& m, const AnalysisConfig& config);

int cmd_analyze(const std::filesystem::path& path, const AnalysisConfig& config,
                std::ostream& out, std::ostream& err);
int cmd_oracle(const std::filesystem::path& path, const std::filesystem::path& harness,
               const AnalysisConfig& config, std::ostream& out, std::ostream& err);
/// `fuzz` > 0 runs each matching harness with seeds seed .. seed + fuzz - 1.
int cmd_diff(const std::filesystem::path& path, const std::string& harness_glob,
             const AnalysisConfig& config, std::size_t fuzz, std::ostream& out,
             std::ostream& err);

/// Paths matching a shell glob, sorted.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace oblint::cli
