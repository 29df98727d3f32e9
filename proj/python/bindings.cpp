#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include <json.hpp>

#include "oblint/cli.hpp"
#include "oblint/dynoracle.hpp"
#include "oblint/taint.hpp"

namespace py = pybind11;
using namespace oblint;

namespace {

ir::Module parse_or_raise(const std::string& text) {
  auto r = ir::parse_module(text);
  std::string msg;
  for (const auto& d : r.diagnostics)
    if (d.is_error()) msg += d.str() + "\n";
  if (!r.ok() || !msg.empty()) throw py::value_error(msg.empty() ? "parse failed" : msg);
  auto diags = ir::validate_module(*r.module);
  for (const auto& d : diags)
    if (d.is_error()) msg += d.str() + "\n";
  if (!msg.empty()) throw py::value_error(msg);
  return std::move(*r.module);
}

cli::AnalysisConfig make_config(bool cloning, bool check_varlat, int max_rounds, std::size_t clone_budget) {
  cli::AnalysisConfig c;
  c.cloning = cloning;
  c.check_varlat = check_varlat;
  c.max_rounds = max_rounds;
  c.clone_budget = clone_budget;
  c.format = cli::Format::Json;
  return c;
}

std::vector<std::string> diagnostics(const std::string& text) {
  auto r = ir::parse_module(text);
  std::vector<std::string> out;
  for (const auto& d : r.diagnostics) out.push_back(d.str());
  if (r.ok())
    for (const auto& d : ir::validate_module(*r.module)) out.push_back(d.str());
  return out;
}

std::string analyze(const std::string& text, const std::string& name, bool cloning, bool check_varlat,
                    int max_rounds, std::size_t clone_budget) {
  auto cfg = make_config(cloning, check_varlat, max_rounds, clone_budget);
  auto r = cli::analyze(parse_or_raise(text), cfg);
  return cli::report_json(r.report, name, cfg);
}

std::string annotate(const std::string& text, bool cloning) {
  auto r = cli::analyze(parse_or_raise(text), make_config(cloning, false, 32, 64));
  return taint::emit_annotated(r.analysis.module, r.analysis.taint);
}

std::string run_oracle(const std::string& text, const std::string& harness, bool cloning,
                       bool check_varlat, std::optional<std::uint64_t> seed) {
  auto cfg = make_config(cloning, check_varlat, 32, 64);
  auto stat = cli::analyze(parse_or_raise(text), cfg);
  dynoracle::Harness h;
  try {
    h = dynoracle::parse_harness(harness);
    if (seed) h.seed = *seed;
  } catch (const dynoracle::HarnessError& e) {
    throw py::value_error(e.what());
  }
  dynoracle::RunConfig rc;
  rc.check_varlat = check_varlat;
  dynoracle::RunResult r;
  try {
    r = dynoracle::run(stat.analysis.module, h, rc);
  } catch (const dynoracle::HarnessError& e) {
    throw py::value_error(e.what());
  }
  nlohmann::json j;
  j["raw"] = r.report.raw.size();
  j["dedup"] = nlohmann::json::array();
  for (const auto& [id, c] : r.report.dedup)
    j["dedup"].push_back({{"instruction", stat.analysis.registry.to_original(id).str()},
                          {"category", policy::category_name(c)}});
  j["trap"] = r.trap ? nlohmann::json(r.trap->at.str() + ": " + r.trap->message) : nlohmann::json();
  j["return_value"] = r.outputs.return_value ? nlohmann::json(*r.outputs.return_value) : nlohmann::json();
  j["return_tainted"] = r.return_tainted;
  j["steps"] = r.steps;
  auto v = dynoracle::subset_check(stat.report, r.report, stat.analysis.registry);
  j["subset"] = v.pass;
  j["escaping"] = nlohmann::json::array();
  for (const auto& [id, c] : v.escaping)
    j["escaping"].push_back({{"instruction", id.str()}, {"category", policy::category_name(c)}});
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_oblint, m) {
  m.doc() = "Bindings for the oblint analyses";
  m.def("diagnostics", &diagnostics, py::arg("text"), "Parse and validation diagnostics.");
  m.def("analyze", &analyze, py::arg("text"), py::arg("name") = "<string>", py::arg("cloning") = true,
        py::arg("check_varlat") = false, py::arg("max_rounds") = 32, py::arg("clone_budget") = 64,
        "Structured report as a JSON string.");
  m.def("annotate", &annotate, py::arg("text"), py::arg("cloning") = true);
  m.def("run_oracle", &run_oracle, py::arg("text"), py::arg("harness"), py::arg("cloning") = true,
        py::arg("check_varlat") = false, py::arg("seed") = py::none(),
        "Dynamic run on the analysed module as a JSON string.");
}
