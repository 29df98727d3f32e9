#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "oblint/cli.hpp"

int main(int argc, char** argv) {
  using oblint::cli::AnalysisConfig;
  using oblint::cli::Format;

  CLI::App app{"oblint: oblivious-execution linter for the blinded-data policy"};
  app.require_subcommand(1);

  AnalysisConfig config;
  std::string format = "text";
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag_function("--no-cloning", [&](std::int64_t) { config.cloning = false; },
                           "Analyse without function cloning");
    cmd->add_option("--max-rounds", config.max_rounds, "Cap on taint/cloning rounds")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--clone-budget", config.clone_budget, "Clones allowed per function");
    cmd->add_flag("--check-varlat", config.check_varlat,
                  "Report divisions with tainted operands");
    cmd->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"text", "json", "structured"}));
  };

  std::string module_path, harness_path, harness_glob;
  std::size_t fuzz = 0;

  auto* analyze = app.add_subcommand("analyze", "Static analysis and policy check");
  analyze->add_option("module", module_path, "Input .bir file")->required();
  add_common(analyze);
  analyze->add_flag("--emit-annotated-ir", config.emit_annotated_ir,
                    "Write <input>.annotated.bir with taint markers");
  analyze->add_flag("--dump-graph", config.dump_graph,
                    "Write <input>.vfg.dot and <input>.pts.txt");

  auto* oracle = app.add_subcommand("oracle", "Run the dynamic taint-tracking interpreter");
  oracle->add_option("module", module_path, "Input .bir file")->required();
  oracle->add_option("harness", harness_path, "Harness JSON file")->required();
  add_common(oracle);

  auto* diff = app.add_subcommand("diff", "Check dynamic findings against the static report");
  diff->add_option("module", module_path, "Input .bir file")->required();
  diff->add_option("harnesses", harness_glob, "Harness file or glob")->required();
  diff->add_option("--fuzz", fuzz, "Runs per harness with consecutive seeds");
  add_common(diff);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : oblint::cli::kError;
  }
  config.format = format == "text" ? Format::Text : Format::Json;

  if (*analyze) return oblint::cli::cmd_analyze(module_path, config, std::cout, std::cerr);
  if (*oracle) return oblint::cli::cmd_oracle(module_path, harness_path, config, std::cout, std::cerr);
  return oblint::cli::cmd_diff(module_path, harness_glob, config, fuzz, std::cout, std::cerr);
}
