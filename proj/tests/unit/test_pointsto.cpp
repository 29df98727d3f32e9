#include <doctest.h>

#include <algorithm>
#include <random>

#include "oblint/pointsto.hpp"
#include "oracles.hpp"

using namespace oblint;
using pointsto::Constraint;
using K = pointsto::Constraint::Kind;

TEST_CASE("solver: basic rules") {
  std::vector<Constraint> cs{
      {K::AddressOf, "p", "a"}, {K::AddressOf, "q", "b"}, {K::Store, "p", "q"},
      {K::Load, "r", "p"},      {K::Copy, "s", "r"},
  };
  auto pts = pointsto::solve(cs);
  CHECK(pts.of("p") == pointsto::ObjectSet{"a"});
  CHECK(pts.contents_of("a") == pointsto::ObjectSet{"b"});
  CHECK(pts.of("s") == pointsto::ObjectSet{"b"});
  CHECK(pts.of("unknown").empty());
}

TEST_CASE("solver: cycles converge") {
  std::vector<Constraint> cs{{K::Copy, "a", "b"}, {K::Copy, "b", "c"}, {K::Copy, "c", "a"},
                             {K::AddressOf, "c", "o"}, {K::Store, "a", "a"}, {K::Load, "d", "b"}};
  auto pts = pointsto::solve(cs);
  for (const char* v : {"a", "b", "c", "d"}) CHECK(pts.of(v) == pointsto::ObjectSet{"o"});
  CHECK(pts.contents_of("o") == pointsto::ObjectSet{"o"});
}

TEST_CASE("solver equals the naive closure on random systems") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
    auto cs = testing::random_constraints(rng, n, 8, 5);
    auto got = pointsto::solve(cs);
    auto want = testing::naive_points_to(cs);
    CHECK(got.values == want.values);
    CHECK(got.contents == want.contents);
  }
}

TEST_CASE("solver is order independent and idempotent") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    auto cs = testing::random_constraints(rng, 25, 6, 4);
    auto first = pointsto::solve(cs);
    std::shuffle(cs.begin(), cs.end(), rng);
    CHECK(pointsto::solve(cs) == first);
    // Feeding the solution back as address-of facts adds nothing.
    auto extra = cs;
    for (const auto& [v, objs] : first.values)
      for (const auto& o : objs) extra.push_back({K::AddressOf, v, o});
    CHECK(pointsto::solve(extra) == first);
  }
}

TEST_CASE("module: two levels of indirection") {
  auto m = testing::load(testing::fixture_dir() / "two_level.bir");
  auto pts = pointsto::analyze(m);
  CHECK(pts.of("main:%l1") == pointsto::ObjectSet{"main:entry:1"});
  CHECK(pts.of("main:%l2") == pointsto::ObjectSet{"main:entry:0"});
  CHECK(pts.contents_of("main:entry:2") == pointsto::ObjectSet{"main:entry:1"});
  CHECK(pts.of("main:%p") == pointsto::ObjectSet{"main:%table"});
  CHECK(pts.sites.at("main:entry:0").kind == pointsto::AbstractObject::Kind::Stack);
  CHECK(pts.sites.at("main:%table").kind == pointsto::AbstractObject::Kind::Extern);
}

TEST_CASE("module: pointer arguments flow into callees") {
  auto m = testing::parse_ok(R"(
global @g : i32
fn use(%p: ptr) -> i32 {
entry:
  %v = load i32, %p
  ret %v
}
fn main(%q: ptr) -> i32 {
entry:
  %s = alloca i32
  %a = call i32 use(%s)
  %b = call i32 use(@g)
  %c = call i32 use(%q)
  ret %a
}
)");
  auto pts = pointsto::analyze(m);
  CHECK(pts.of("use:%p") ==
        pointsto::ObjectSet{"@g", "main:%q", "main:entry:0", pointsto::incoming_object("use", "p")});
  CHECK(pts.of("@g") == pointsto::ObjectSet{"@g"});
}

TEST_CASE("module: returned addresses and the extern model") {
  auto m = testing::parse_ok(R"(
extern malloc(i64) -> ptr
extern swap(ptr, ptr) -> void
fn mk() -> ptr {
entry:
  %h = call ptr malloc(16)
  ret %h
}
fn main() -> i32 {
entry:
  %a = call ptr mk()
  %x = alloca ptr
  %y = alloca ptr
  store ptr %a, %x
  call void swap(%x, %y)
  %l = load ptr, %y
  ret 0
}
)");
  auto pts = pointsto::analyze(m);
  CHECK(pts.of("main:%a") == pointsto::ObjectSet{"mk:entry:0"});
  CHECK(pts.sites.at("mk:entry:0").kind == pointsto::AbstractObject::Kind::Extern);
  // Unknown code may move pointers between everything its arguments reach.
  CHECK(pts.of("main:%l").count("mk:entry:0") == 1);
  CHECK(pointsto::dump(pts).find("main:%l -> {") != std::string::npos);
}
