#include "oblint/cli.hpp"

#include <glob.h>

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "oblint/pointsto.hpp"
#include "oblint/taint.hpp"
#include "oblint/vfg.hpp"

namespace oblint::cli {

using json = nlohmann::json;

cloning::CloneConfig AnalysisConfig::clone_config() const {
  return cloning::CloneConfig{cloning, max_rounds, clone_budget};
}

policy::PolicyConfig AnalysisConfig::policy_config() const {
  return policy::PolicyConfig{check_varlat, suppress_branch_check};
}

std::optional<ir::Module> load_module(const std::filesystem::path& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot read " << path.string() << "\n";
    return std::nullopt;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  auto parsed = ir::parse_module(buf.str());
  for (const auto& d : parsed.diagnostics) err << path.string() << ":" << d.str() << "\n";
  if (!parsed.ok()) return std::nullopt;
  auto diags = ir::validate_module(*parsed.module);
  for (const auto& d : diags) err << path.string() << ":" << d.str() << "\n";
  if (ir::has_errors(diags)) return std::nullopt;
  return std::move(parsed.module);
}

namespace {

std::string trace_text(const std::vector<vfg::Node>& trace) {
  std::string s;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) s += " -> ";
    s += trace[i].str();
  }
  return s;
}

void write_file(const std::filesystem::path& p, const std::string& text, std::ostream& err) {
  std::ofstream out(p);
  if (!out) {
    err << "error: cannot write " << p.string() << "\n";
    return;
  }
  out << text;
}

std::string counts(std::size_t memory, std::size_t branch) {
  return std::to_string(memory) + "/" + std::to_string(branch);
}

}  // namespace

std::string report_text(const policy::ViolationReport& r) {
  std::ostringstream os;
  if (r.empty()) {
    os << "no violations\n";
    return os.str();
  }
  for (const auto& v : r.violations) {
    os << v.location.str() << " " << policy::category_name(v.category);
    if (!(v.instance == v.location)) os << " (in " << v.instance.function << ")";
    os << "\n  trace: " << trace_text(v.trace) << "\n";
  }
  const auto& s = r.summary;
  os << "summary: branch=" << s.branch << " memory=" << s.memory() << " (load=" << s.mem_load
     << " store=" << s.mem_store << ") varlat=" << s.varlat << " extern-call=" << s.extern_call
     << "\n";
  return os.str();
}

std::string report_json(const policy::ViolationReport& r, const std::string& module_name,
                        const AnalysisConfig& config) {
  json j;
  j["schema_version"] = 1;
  j["module"] = module_name;
  j["config"] = {{"cloning", config.cloning},
                 {"max_rounds", config.max_rounds},
                 {"clone_budget", config.clone_budget},
                 {"check_varlat", config.check_varlat}};
  j["violations"] = json::array();
  for (const auto& v : r.violations) {
    json tr = json::array();
    for (const auto& n : v.trace) tr.push_back(n.str());
    j["violations"].push_back({{"function", v.location.function},
                               {"block", v.location.block},
                               {"index", v.location.index},
                               {"category", std::string(policy::category_name(v.category))},
                               {"trace", std::move(tr)}});
  }
  j["summary"] = {{"branch", r.summary.branch},
                  {"memory", r.summary.memory()},
                  {"varlat", r.summary.varlat},
                  {"extern_call", r.summary.extern_call}};
  return j.dump(2) + "\n";
}

StaticResult analyze(const ir::Module& m, const AnalysisConfig& config) {
  StaticResult r{cloning::analyze_to_fixpoint(m, config.clone_config()), {}};
  r.report = policy::validate(r.analysis, config.policy_config());
  return r;
}

int cmd_analyze(const std::filesystem::path& path, const AnalysisConfig& config,
                std::ostream& out, std::ostream& err) {
  auto m = load_module(path, err);
  if (!m) return kError;
  StaticResult r = analyze(*m, config);
  for (const auto& d : r.analysis.diagnostics) err << path.string() << ":" << d.str() << "\n";

  if (config.emit_annotated_ir) {
    auto p = path;
    p += ".annotated.bir";
    write_file(p, taint::emit_annotated(r.analysis.module, r.analysis.taint), err);
  }
  if (config.dump_graph) {
    auto dot = path;
    dot += ".vfg.dot";
    write_file(dot, vfg::to_dot(r.analysis.graph), err);
    auto pts = path;
    pts += ".pts.txt";
    write_file(pts, pointsto::dump(r.analysis.pts), err);
  }

  if (config.format == Format::Json)
    out << report_json(r.report, path.filename().string(), config);
  else
    out << report_text(r.report);
  return r.report.empty() ? kClean : kFindings;
}

int cmd_oracle(const std::filesystem::path& path, const std::filesystem::path& harness,
               const AnalysisConfig& config, std::ostream& out, std::ostream& err) {
  auto m = load_module(path, err);
  if (!m) return kError;
  dynoracle::RunResult r;
  try {
    auto h = dynoracle::load_harness(harness);
    dynoracle::RunConfig rc;
    rc.check_varlat = config.check_varlat;
    r = dynoracle::run(*m, h, rc);
  } catch (const dynoracle::HarnessError& e) {
    err << harness.string() << ": " << e.what() << "\n";
    return kError;
  }
  for (const auto& w : r.report.raw) out << dynoracle::format_warning(w) << "\n";
  out << "raw=" << r.report.raw.size() << " dedup=" << r.report.dedup.size() << "\n";
  for (const auto& [id, c] : r.report.dedup) out << "  " << id.str() << " " << policy::category_name(c) << "\n";
  if (r.trap) {
    err << "trap at " << r.trap->at.str() << ": " << r.trap->message << "\n";
    return kError;
  }
  if (r.outputs.return_value)
    out << "return=" << static_cast<std::int64_t>(*r.outputs.return_value)
        << (r.return_tainted ? " (tainted)" : "") << "\n";
  return r.report.dedup.empty() ? kClean : kFindings;
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
  std::vector<std::filesystem::path> out;
  glob_t g{};
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  ::globfree(&g);
  return out;
}

int cmd_diff(const std::filesystem::path& path, const std::string& harness_glob,
             const AnalysisConfig& config, std::size_t fuzz, std::ostream& out,
             std::ostream& err) {
  auto m = load_module(path, err);
  if (!m) return kError;
  auto files = expand_glob(harness_glob);
  if (files.empty()) {
    err << "error: no harness matches '" << harness_glob << "'\n";
    return kError;
  }
  StaticResult st = analyze(*m, config);
  dynoracle::RunConfig rc;
  rc.check_varlat = config.check_varlat;

  bool failed = false, trapped = false;
  std::set<dynoracle::Finding> dynamic;
  std::size_t runs = 0;
  for (const auto& f : files) {
    dynoracle::Harness base;
    try {
      base = dynoracle::load_harness(f);
    } catch (const dynoracle::HarnessError& e) {
      err << f.string() << ": " << e.what() << "\n";
      return kError;
    }
    const std::size_t n = fuzz ? fuzz : 1;
    for (std::size_t k = 0; k < n; ++k) {
      dynoracle::Harness h = base;
      h.seed = base.seed + k;
      dynoracle::RunResult r;
      try {
        r = dynoracle::run(st.analysis.module, h, rc);
      } catch (const dynoracle::HarnessError& e) {
        err << f.string() << ": " << e.what() << "\n";
        return kError;
      }
      ++runs;
      auto v = dynoracle::subset_check(st.report, r.report, st.analysis.registry);
      for (const auto& [id, c] : r.report.dedup) dynamic.emplace(st.analysis.registry.to_original(id), c);
      out << f.filename().string() << " seed=" << h.seed;
      if (r.trap) {
        trapped = true;
        out << " TRAP " << r.trap->at.str() << ": " << r.trap->message << "\n";
        continue;
      }
      out << (v.pass ? " PASS" : " FAIL") << " raw=" << r.report.raw.size()
          << " dedup=" << r.report.dedup.size() << "\n";
      for (const auto& [id, c] : v.escaping)
        out << "  escaping: " << id.str() << " " << policy::category_name(c) << "\n";
      failed = failed || !v.pass;
    }
  }
  std::size_t dyn_mem = 0, dyn_branch = 0;
  for (const auto& [id, c] : dynamic) {
    if (c == policy::Category::Branch) ++dyn_branch;
    if (c == policy::Category::MemLoad || c == policy::Category::MemStore) ++dyn_mem;
  }
  out << "runs=" << runs << " static " << counts(st.report.summary.memory(), st.report.summary.branch)
      << ", dynamic " << counts(dyn_mem, dyn_branch) << "\n";
  if (trapped) return kError;
  return failed ? kFindings : kClean;
}

}  // namespace oblint::cli
