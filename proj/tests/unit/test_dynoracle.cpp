#include <doctest.h>

#include <random>

#include "oblint/dynoracle.hpp"
#include "oblint/policy.hpp"
#include "oracles.hpp"

using namespace oblint;
using dynoracle::ArgSpec;
using dynoracle::Harness;
using policy::Category;

namespace {

Harness corpus_harness(const std::string& name) {
  return dynoracle::load_harness(testing::corpus_dir() / (name + ".harness.json"));
}
ir::Module corpus_module(const std::string& name) {
  return testing::load(testing::corpus_dir() / (name + ".bir"));
}

ArgSpec scalar(std::int64_t v, bool tainted = false) {
  ArgSpec a;
  a.type = ir::Type::i32();
  a.values = {v};
  a.taint = tainted ? ArgSpec::Taint::All : ArgSpec::Taint::None;
  return a;
}

std::string trap_of(const ir::Module& m, const Harness& h, dynoracle::RunConfig rc = {}) {
  auto r = dynoracle::run(m, h, rc);
  return r.trap ? r.trap->at.str() + ": " + r.trap->message : "";
}

/// (module, harness) pairs covering the corpus, fixtures and random programs.
std::vector<std::pair<ir::Module, Harness>> cases(std::size_t random_programs, std::uint64_t seed) {
  std::vector<std::pair<ir::Module, Harness>> out;
  for (const auto& n : testing::corpus_names())
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto h = corpus_harness(n);
      h.seed = s;
      out.emplace_back(corpus_module(n), h);
    }
  for (const char* f : {"forward_call", "recursion", "two_level", "globals"}) {
    auto m = testing::load(testing::fixture_dir() / (std::string(f) + ".bir"));
    auto h = dynoracle::load_harness(testing::fixture_dir() / (std::string(f) + ".harness.json"));
    for (std::uint64_t s = 0; s < 5; ++s) {
      h.seed = s;
      out.emplace_back(m, h);
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < random_programs; ++i) {
    auto m = testing::parse_ok(testing::random_program(rng));
    for (int k = 0; k < 3; ++k) {
      auto h = testing::random_harness(rng, m);
      out.emplace_back(m, h);
    }
  }
  return out;
}

std::string operand_key(const ir::Function& f, const ir::Operand& op) {
  if (auto v = std::get_if<ir::ValueRef>(&op)) return ir::value_key(f.name, v->name);
  if (auto g = std::get_if<ir::GlobalRef>(&op)) return ir::global_key(g->name);
  return {};
}

}  // namespace

TEST_CASE("harness: parse, serialise, materialise") {
  auto h = dynoracle::parse_harness(R"({
    "entry": "f", "seed": 3, "max_steps": 500,
    "args": [
      {"type": "i32", "value": 4, "taint": true},
      {"type": "[2 x { i8, i32 }]", "value": [[1, 2], [3, 4]], "taint": [1,0,0,0,0, 0,1,1,1,1]},
      {"type": "[3 x i64]", "generator": {"min": -5, "max": 5}}
    ]})");
  CHECK(h.entry == "f");
  CHECK(h.max_steps == 500);
  CHECK(h.args[0].taint == ArgSpec::Taint::All);
  CHECK(h.args[1].values == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(h.args[1].mask.size() == 10);
  auto again = dynoracle::parse_harness(dynoracle::harness_to_json(h));
  CHECK(dynoracle::harness_to_json(again) == dynoracle::harness_to_json(h));
  auto concrete = dynoracle::materialize(h);
  REQUIRE(concrete.args[2].values.size() == 3);
  for (auto v : concrete.args[2].values) CHECK((v >= -5 && v <= 5));
  CHECK(dynoracle::materialize(h).args[2].values == concrete.args[2].values);
  CHECK_FALSE(dynoracle::without_taint(h).args[0].tainted());

  CHECK_THROWS_AS(dynoracle::parse_harness("{"), dynoracle::HarnessError);
  CHECK_THROWS_AS(dynoracle::parse_harness(R"({"entry": "f", "args": [{"type": "i32"}]})"),
                  dynoracle::HarnessError);
  CHECK_THROWS_AS(dynoracle::parse_harness(R"({"entry": "f", "args": [{"type": "i99", "value": 1}]})"),
                  dynoracle::HarnessError);
}

TEST_CASE("harness: checked against the entry signature") {
  auto m = corpus_module("add_cloning");
  Harness h;
  h.entry = "main";
  h.args = {scalar(1, true), scalar(2)};
  CHECK_FALSE(dynoracle::check_harness(m, h).empty());
  ArgSpec table;
  table.type = *ir::parse_type("[8 x i32]");
  table.values.assign(8, 0);
  h.args.push_back(table);
  CHECK(dynoracle::check_harness(m, h).empty());
  h.args[1].taint = ArgSpec::Taint::All;
  auto errs = dynoracle::check_harness(m, h);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("blinded") != std::string::npos);
  h.args[1].taint = ArgSpec::Taint::None;
  h.args[0].type = ir::Type::i64();
  CHECK_FALSE(dynoracle::check_harness(m, h).empty());
  CHECK_THROWS_AS(dynoracle::run(m, h), dynoracle::HarnessError);
  h.entry = "nope";
  CHECK_FALSE(dynoracle::check_harness(m, h).empty());
}

TEST_CASE("find_max: a hundred warnings at one instruction") {
  auto m = corpus_module("find_max");
  auto r = dynoracle::run(m, corpus_harness("find_max"));
  CHECK_FALSE(r.trap);
  CHECK(r.report.raw.size() == 100);
  REQUIRE(r.report.dedup.size() == 1);
  CHECK(*r.report.dedup.begin() == dynoracle::Finding{ir::InstId{"find_max", "body", 4}, Category::Branch});
  CHECK(dynoracle::format_warning(r.report.raw[0]).rfind("WARN branch find_max:body:4 step=", 0) == 0);
  // The result is the true maximum.
  auto h = dynoracle::materialize(corpus_harness("find_max"));
  auto best = *std::max_element(h.args[0].values.begin(), h.args[0].values.end());
  const auto& out = r.outputs.arg_objects[2];
  std::int32_t got = static_cast<std::int32_t>(out[0] | out[1] << 8 | out[2] << 16 | out[3] << 24);
  CHECK(got == best);
}

TEST_CASE("matrix_mult: computes the product without warnings") {
  auto m = corpus_module("matrix_mult");
  auto h = dynoracle::materialize(corpus_harness("matrix_mult"));
  auto r = dynoracle::run(m, h);
  CHECK(r.report.raw.empty());
  const auto& a = h.args[0].values;
  const auto& b = h.args[1].values;
  const auto& c = r.outputs.arg_objects[2];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::int64_t want = 0;
      for (int k = 0; k < 4; ++k) want += a[i * 4 + k] * b[k * 4 + j];
      std::size_t off = (i * 4 + j) * 4;
      std::int32_t got = static_cast<std::int32_t>(c[off] | c[off + 1] << 8 | c[off + 2] << 16 |
                                                   static_cast<std::uint32_t>(c[off + 3]) << 24);
      CHECK(got == want);
    }
}

TEST_CASE("page_rank: byte masks select what is secret") {
  auto m = corpus_module("page_rank");
  auto h = corpus_harness("page_rank");
  h.args[1].generator.reset();
  h.args[1].values = {8};
  auto all = dynoracle::run(m, h);
  CHECK(all.report.dedup.size() == 2);
  CHECK(all.report.raw.size() == 16);
  // Taint only the destination fields: the increment uses public addresses.
  h.args[0].taint = ArgSpec::Taint::Mask;
  h.args[0].mask.assign(h.args[0].type.size(), false);
  for (std::size_t e = 0; e < 8; ++e)
    for (std::size_t k = 4; k < 8; ++k) h.args[0].mask[e * 8 + k] = true;
  auto dst = dynoracle::run(m, h);
  CHECK(dst.report.raw.empty());
}

TEST_CASE("select propagates without warning") {
  auto m = corpus_module("ct_max");
  auto r = dynoracle::run(m, corpus_harness("ct_max"));
  CHECK(r.report.raw.empty());
  dynoracle::RunConfig rc;
  rc.observe = true;
  auto o = dynoracle::run(m, corpus_harness("ct_max"), rc);
  CHECK(o.observations.tainted_values.count("ct_max:%m.next") == 1);
  CHECK(o.observations.tainted_objects.count("ct_max:%out") == 1);
}

TEST_CASE("externs: stubs and their warnings") {
  auto m = corpus_module("lib_calls");
  auto h = corpus_harness("lib_calls");
  h.args[0].generator.reset();
  h.args[0].values = {300};
  auto r = dynoracle::run(m, h);
  REQUIRE_FALSE(r.trap);
  CHECK(r.report.dedup.size() == 3);
  CHECK(*r.outputs.return_value == 255 / 3);
  CHECK(r.return_tainted);
  CHECK(r.outputs.arg_objects[0] == std::vector<std::uint8_t>{7, 1, 3, 9});
  CHECK(r.outputs.globals[1] == std::vector<std::uint8_t>{1, 0, 0, 0});
  dynoracle::RunConfig rc;
  rc.check_varlat = true;
  CHECK(dynoracle::run(m, h, rc).report.dedup.size() == 4);

  auto u = testing::parse_ok(R"(
extern mystery(i32) -> i32
fn f(%x: i32) -> i32 {
entry:
  %y = call i32 mystery(%x)
  ret %y
}
)");
  Harness hu;
  hu.entry = "f";
  hu.args = {scalar(1)};
  CHECK(trap_of(u, hu) == "f:entry:0: no stub registered for extern 'mystery'");
}

TEST_CASE("traps name the instruction") {
  auto div = testing::load(testing::fixture_dir() / "division.bir");
  auto h = dynoracle::load_harness(testing::fixture_dir() / "division.harness.json");
  CHECK(trap_of(div, h) == "div:entry:0: division by zero");
  h.args[0].values = {-2147483648LL};
  h.args[1].values = {-1};
  CHECK(trap_of(div, h) == "div:entry:0: signed division overflow");

  auto oob = testing::parse_ok(R"(
fn f(%i: i32) -> i32 {
entry:
  %a = alloca i32, 4
  %p = addr i32, %a, %i
  %v = load i32, %p
  ret %v
}
)");
  Harness ho;
  ho.entry = "f";
  ho.args = {scalar(3)};
  CHECK(trap_of(oob, ho).empty());
  ho.args = {scalar(4)};
  CHECK(trap_of(oob, ho).rfind("f:entry:2: out-of-bounds load", 0) == 0);
  ho.args = {scalar(-1)};
  CHECK(trap_of(oob, ho).rfind("f:entry:2: out-of-bounds load", 0) == 0);

  auto shift = testing::parse_ok("fn f(%i: i32) -> i32 { entry: %v = shl i32 1, %i\n ret %v }");
  ho.args = {scalar(32)};
  CHECK(trap_of(shift, ho) == "f:entry:0: shift amount out of range");

  auto loop = testing::parse_ok("fn f(%i: i32) -> i32 { entry: jmp entry2\n entry2: jmp entry2 }");
  ho.max_steps = 1000;
  auto r = dynoracle::run(loop, ho);
  REQUIRE(r.trap);
  CHECK(r.trap->message.find("step limit") != std::string::npos);
  CHECK(r.steps == 1000);

  auto deep = testing::parse_ok(R"(
fn f(%i: i32) -> i32 {
entry:
  %r = call i32 f(%i)
  ret %r
}
)");
  ho.max_steps = 1'000'000;
  CHECK(trap_of(deep, ho).find("call depth") != std::string::npos);

  auto dangling = testing::parse_ok(R"(
fn g() -> ptr {
entry:
  %a = alloca i32
  ret %a
}
fn f(%i: i32) -> i32 {
entry:
  %p = call ptr g()
  %v = load i32, %p
  ret %v
}
)");
  CHECK(trap_of(dangling, ho) == "f:entry:1: load of a dead stack object");
}

TEST_CASE("integer semantics") {
  auto m = testing::parse_ok(R"(
fn f(%x: i32) -> i64 {
entry:
  %a = sub i32 0, %x
  %b = ashr i32 %a, 1
  %c = lshr i32 %a, 28
  %d = srem i32 %a, 3
  %e = urem i32 %a, 3
  %n = cast i32 %a to i8
  %w = cast i8 %n to i64
  %t = icmp ult i32 %a, %x
  %z = cast i1 %t to i64
  %s1 = cast i32 %b to i64
  %s2 = cast i32 %c to i64
  %s3 = cast i32 %d to i64
  %s4 = cast i32 %e to i64
  %r1 = mul i64 %s1, 1000000
  %r2 = add i64 %r1, %s2
  %r3 = mul i64 %r2, 100
  %r4 = add i64 %r3, %s3
  %r5 = mul i64 %r4, 100
  %r6 = add i64 %r5, %s4
  %r7 = mul i64 %r6, 1000
  %r8 = add i64 %r7, %w
  %r9 = add i64 %r8, %z
  ret %r9
}
)");
  Harness h;
  h.entry = "f";
  h.args = {scalar(7)};
  auto r = dynoracle::run(m, h);
  REQUIRE(r.outputs.return_value);
  // a = -7: ashr 1 = -4, lshr 28 = 15, srem = -1, urem = (2^32 - 7) % 3 = 0,
  // i8 -7 sign-extends to -7, ult(-7, 7) is false.
  std::int64_t want = (((-4LL * 1000000 + 15) * 100 + -1) * 100 + 0) * 1000 + -7 + 0;
  CHECK(static_cast<std::int64_t>(*r.outputs.return_value) == want);
}

TEST_CASE("determinism: same harness, same warnings") {
  for (const auto& n : testing::corpus_names()) {
    auto m = corpus_module(n);
    auto h = corpus_harness(n);
    auto a = dynoracle::run(m, h), b = dynoracle::run(m, h);
    REQUIRE(a.report.raw.size() == b.report.raw.size());
    for (std::size_t i = 0; i < a.report.raw.size(); ++i)
      CHECK(dynoracle::format_warning(a.report.raw[i]) == dynoracle::format_warning(b.report.raw[i]));
    CHECK(a.outputs == b.outputs);
  }
}

TEST_CASE("non-interference: taint never changes concrete results") {
  for (auto& [m, h] : cases(60, 1)) {
    auto with = dynoracle::run(m, h);
    auto without = dynoracle::run(m, dynoracle::without_taint(h));
    CHECK(with.outputs == without.outputs);
    CHECK(with.steps == without.steps);
    CHECK_FALSE(with.trap);
  }
}

TEST_CASE("untainted harness: no warnings") {
  for (auto& [m, h] : cases(30, 2)) {
    bool blinded_global = false;
    for (const auto& g : m.globals) blinded_global = blinded_global || g.blinded;
    if (blinded_global) continue;
    CHECK(dynoracle::run(m, dynoracle::without_taint(h)).report.raw.empty());
  }
}

TEST_CASE("clone transparency: cloned modules compute the same results") {
  for (auto& [m, h] : cases(60, 3)) {
    auto a = cloning::analyze_to_fixpoint(m);
    auto before = dynoracle::run(m, h);
    auto after = dynoracle::run(a.module, h);
    CHECK(before.outputs == after.outputs);
    CHECK(before.steps == after.steps);
  }
}

TEST_CASE("static results cover every dynamic observation") {
  std::size_t checked = 0;
  for (auto& [m, h] : cases(150, 4)) {
    auto a = cloning::analyze_to_fixpoint(m);
    policy::PolicyConfig pc;
    pc.check_varlat = true;
    auto report = policy::validate(a, pc);
    dynoracle::RunConfig rc;
    rc.observe = true;
    rc.check_varlat = true;
    auto r = dynoracle::run(a.module, h, rc);
    REQUIRE_FALSE(r.trap);
    const auto& ob = r.observations;

    for (const auto& v : ob.tainted_values) CHECK_MESSAGE(a.taint.value_tainted(v), v);
    for (const auto& o : ob.tainted_objects) CHECK_MESSAGE(a.taint.object_tainted(o), o);
    for (const auto& [v, site] : ob.pointer_targets) CHECK_MESSAGE(a.pts.of(v).count(site) == 1, (std::string(v) + " -> " + site));
    for (const auto& [c, site] : ob.content_targets)
      CHECK_MESSAGE(a.pts.contents_of(c).count(site) == 1, (std::string(c) + " holds " + site));

    for (const auto& [id, site] : ob.loads) {
      const auto* inst = a.module.at(id);
      REQUIRE(inst);
      if (inst->op != ir::Opcode::Load) continue;
      const auto& f = *a.module.find_function(id.function);
      CHECK(a.pts.of(operand_key(f, inst->operands[0])).count(site) == 1);
      auto o = a.graph.find_object(site), res = a.graph.find_value(ir::value_key(f.name, *inst->result));
      REQUIRE(o);
      REQUIRE(res);
      CHECK(a.graph.has_edge(*o, *res, vfg::EdgeLabel::MemoryRead));
    }
    for (const auto& [id, site] : ob.stores) {
      const auto* inst = a.module.at(id);
      REQUIRE(inst);
      if (inst->op != ir::Opcode::Store) continue;
      const auto& f = *a.module.find_function(id.function);
      CHECK(a.pts.of(operand_key(f, inst->operands[1])).count(site) == 1);
      if (auto v = std::get_if<ir::ValueRef>(&inst->operands[0])) {
        auto from = a.graph.find_value(ir::value_key(f.name, v->name));
        auto o = a.graph.find_object(site);
        REQUIRE(from);
        REQUIRE(o);
        CHECK(a.graph.has_edge(*from, *o, vfg::EdgeLabel::MemoryWrite));
      }
    }

    auto verdict = dynoracle::subset_check(report, r.report, a.registry);
    CHECK(verdict.pass);
    if (report.empty()) CHECK(r.report.raw.empty());
    ++checked;
  }
  CHECK(checked > 500);
}

TEST_CASE("subset_check") {
  policy::ViolationReport st;
  st.violations.push_back({ir::InstId{"f", "b", 1}, ir::InstId{"f#1", "b", 1}, Category::Branch, {}});
  dynoracle::DynReport dyn;
  CHECK(dynoracle::subset_check(st, dyn).pass);
  dyn.add({ir::InstId{"f#1", "b", 1}, Category::Branch, 3});
  CHECK_FALSE(dynoracle::subset_check(st, dyn).pass);
  cloning::CloneRegistry reg;
  auto sig = cloning::TaintSignature::clear_for(1);
  sig.params[0].by_value = true;
  reg.add("f", sig);
  CHECK(dynoracle::subset_check(st, dyn, reg).pass);
  dyn.add({ir::InstId{"f", "b", 2}, Category::MemLoad, 4});
  auto v = dynoracle::subset_check(st, dyn, reg);
  CHECK_FALSE(v.pass);
  REQUIRE(v.escaping.size() == 1);
  CHECK(v.escaping[0].first == ir::InstId{"f", "b", 2});
  CHECK(dyn.raw.size() == 2);
}
