#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oblint/cli.hpp"
#include "oracles.hpp"

using namespace oblint;
namespace fs = std::filesystem;

namespace {

struct Out {
  int code;
  std::string out;
  std::string err;
};

fs::path corpus(const std::string& name) { return testing::corpus_dir() / name; }

Out analyze(const fs::path& p, cli::AnalysisConfig c = {}) {
  std::ostringstream o, e;
  int code = cli::cmd_analyze(p, c, o, e);
  return {code, o.str(), e.str()};
}

Out oracle(const fs::path& p, const fs::path& h, cli::AnalysisConfig c = {}) {
  std::ostringstream o, e;
  int code = cli::cmd_oracle(p, h, c, o, e);
  return {code, o.str(), e.str()};
}

Out diff(const fs::path& p, const std::string& glob, std::size_t fuzz, cli::AnalysisConfig c = {}) {
  std::ostringstream o, e;
  int code = cli::cmd_diff(p, glob, c, fuzz, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch_copy(const fs::path& src) {
  std::random_device rd;
  auto dir = fs::temp_directory_path() / ("oblint-test-" + std::to_string(rd()));
  fs::create_directories(dir);
  fs::copy_file(src, dir / src.filename());
  return dir / src.filename();
}

}  // namespace

TEST_CASE("analyze: exit codes") {
  auto fm = analyze(corpus("find_max.bir"));
  CHECK(fm.code == cli::kFindings);
  CHECK(fm.out.find("find_max:body:4 branch") != std::string::npos);
  CHECK(fm.out.find("trace: obj(find_max:%arr) -> find_max:%v -> find_max:%gt") != std::string::npos);

  auto mm = analyze(corpus("matrix_mult.bir"));
  CHECK(mm.code == cli::kClean);
  CHECK(mm.out == "no violations\n");

  auto bad = analyze(testing::fixture_dir() / "broken.bir");
  CHECK(bad.code == cli::kError);
  CHECK(bad.err.find("missing terminator in block 'entry'") != std::string::npos);

  CHECK(analyze("/nonexistent/file.bir").code == cli::kError);
}

TEST_CASE("analyze: cloning toggle") {
  CHECK(analyze(corpus("add_cloning.bir")).code == cli::kClean);
  cli::AnalysisConfig c;
  c.cloning = false;
  auto r = analyze(corpus("add_cloning.bir"), c);
  CHECK(r.code == cli::kFindings);
  CHECK(r.out.find("main:entry:3 mem-load") != std::string::npos);
}

TEST_CASE("analyze: structured output is self-contained and matches text") {
  for (const auto& n : testing::corpus_names()) {
    cli::AnalysisConfig c;
    c.format = cli::Format::Json;
    auto j = nlohmann::json::parse(analyze(corpus(n + ".bir"), c).out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["module"] == n + ".bir");
    CHECK(j["config"]["cloning"] == true);
    std::size_t branch = 0, memory = 0, varlat = 0, ext = 0;
    std::set<std::string> from_json;
    for (const auto& v : j["violations"]) {
      std::string cat = v["category"];
      if (cat == "branch") ++branch;
      if (cat == "mem-load" || cat == "mem-store") ++memory;
      if (cat == "varlat") ++varlat;
      if (cat == "extern-call") ++ext;
      CHECK(v["trace"].is_array());
      from_json.insert(v["function"].get<std::string>() + ":" + v["block"].get<std::string>() + ":" +
                       std::to_string(v["index"].get<int>()) + " " + cat);
    }
    CHECK(j["summary"]["branch"] == branch);
    CHECK(j["summary"]["memory"] == memory);
    CHECK(j["summary"]["varlat"] == varlat);
    CHECK(j["summary"]["extern_call"] == ext);

    std::set<std::string> from_text;
    std::istringstream text(analyze(corpus(n + ".bir")).out);
    for (std::string line; std::getline(text, line);)
      if (!line.empty() && line[0] != ' ' && line.rfind("summary:", 0) != 0 && line != "no violations")
        from_text.insert(line.substr(0, line.find(" (in ")));
    CHECK(from_text == from_json);
  }
}

TEST_CASE("analyze: annotated IR and graph dumps beside the input") {
  auto p = scratch_copy(corpus("find_max.bir"));
  cli::AnalysisConfig c;
  c.emit_annotated_ir = true;
  c.dump_graph = true;
  CHECK(analyze(p, c).code == cli::kFindings);
  auto annotated = testing::read_file(p.string() + ".annotated.bir");
  CHECK(annotated.find("%gt = icmp sgt i32 %v, %cur !t") != std::string::npos);
  CHECK(testing::read_file(p.string() + ".vfg.dot").find("digraph") != std::string::npos);
  CHECK(testing::read_file(p.string() + ".pts.txt").find("find_max:%p -> {find_max:%arr}") !=
        std::string::npos);
  fs::remove_all(p.parent_path());
}

TEST_CASE("oracle: raw and deduplicated counts") {
  auto r = oracle(corpus("find_max.bir"), corpus("find_max.harness.json"));
  CHECK(r.code == cli::kFindings);
  CHECK(r.out.find("raw=100 dedup=1\n") != std::string::npos);
  CHECK(r.out.rfind("WARN branch find_max:body:4 step=", 0) == 0);

  auto p = scratch_copy(corpus("find_max.harness.json"));
  auto h = dynoracle::load_harness(p);
  {
    std::ofstream out(p);
    out << dynoracle::harness_to_json(dynoracle::without_taint(h));
  }
  auto clean = oracle(corpus("find_max.bir"), p);
  CHECK(clean.code == cli::kClean);
  CHECK(clean.out.rfind("raw=0 dedup=0\n", 0) == 0);
  fs::remove_all(p.parent_path());

  auto trap = oracle(testing::fixture_dir() / "division.bir", testing::fixture_dir() / "division.harness.json");
  CHECK(trap.code == cli::kError);
  CHECK(trap.err.find("trap at div:entry:0: division by zero") != std::string::npos);

  auto mismatch = oracle(corpus("find_max.bir"), corpus("matrix_mult.harness.json"));
  CHECK(mismatch.code == cli::kError);
}

TEST_CASE("diff: verdicts and summary") {
  auto fm = diff(corpus("find_max.bir"), corpus("find_max.harness.json").string(), 10);
  CHECK(fm.code == cli::kClean);
  CHECK(fm.out.find("runs=10 static 0/1, dynamic 0/1") != std::string::npos);

  auto mm = diff(corpus("matrix_mult.bir"), (testing::corpus_dir() / "matrix_mult*.json").string(), 10);
  CHECK(mm.code == cli::kClean);
  CHECK(mm.out.find("static 0/0, dynamic 0/0") != std::string::npos);

  CHECK(diff(corpus("find_max.bir"), "/nonexistent/*.json", 1).code == cli::kError);
  CHECK(diff(testing::fixture_dir() / "division.bir",
             (testing::fixture_dir() / "division.harness.json").string(), 1)
            .code == cli::kError);
}

TEST_CASE("diff: a broken policy build is caught") {
  cli::AnalysisConfig c;
  c.suppress_branch_check = true;
  auto r = diff(corpus("find_max.bir"), corpus("find_max.harness.json").string(), 3, c);
  CHECK(r.code == cli::kFindings);
  CHECK(r.out.find("escaping: find_max:body:4 branch") != std::string::npos);
}

TEST_CASE("glob expansion is sorted") {
  auto files = cli::expand_glob((testing::corpus_dir() / "*.bir").string());
  CHECK(files.size() == testing::corpus_names().size());
  CHECK(std::is_sorted(files.begin(), files.end()));
}
