#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oblint/dynoracle.hpp"

namespace oblint::dynoracle {

using json = nlohmann::json;

bool ArgSpec::tainted() const {
  if (taint == Taint::All) return true;
  if (taint == Taint::Mask)
    for (bool b : mask)
      if (b) return true;
  return false;
}

namespace {

void flatten(const json& j, std::vector<std::int64_t>& out) {
  if (j.is_array()) {
    for (const auto& e : j) flatten(e, out);
  } else if (j.is_number_integer()) {
    out.push_back(j.get<std::int64_t>());
  } else if (j.is_boolean()) {
    out.push_back(j.get<bool>() ? 1 : 0);
  } else {
    throw HarnessError("argument values must be integers or lists of integers");
  }
}

ArgSpec parse_arg(const json& j, std::size_t index) {
  auto where = "argument " + std::to_string(index) + ": ";
  if (!j.is_object()) throw HarnessError(where + "expected an object");
  ArgSpec a;
  if (!j.contains("type") || !j["type"].is_string()) throw HarnessError(where + "missing 'type'");
  auto t = ir::parse_type(j["type"].get<std::string>());
  if (!t) throw HarnessError(where + "malformed type '" + j["type"].get<std::string>() + "'");
  a.type = *t;
  if (j.contains("value")) flatten(j["value"], a.values);
  if (j.contains("generator")) {
    const auto& g = j["generator"];
    if (!g.is_object() || !g.contains("min") || !g.contains("max"))
      throw HarnessError(where + "generator needs 'min' and 'max'");
    a.generator = Generator{g["min"].get<std::int64_t>(), g["max"].get<std::int64_t>()};
    if (a.generator->min > a.generator->max) throw HarnessError(where + "generator min > max");
  }
  if (a.values.empty() && !a.generator) throw HarnessError(where + "needs 'value' or 'generator'");
  if (j.contains("taint")) {
    const auto& tj = j["taint"];
    if (tj.is_boolean()) {
      a.taint = tj.get<bool>() ? ArgSpec::Taint::All : ArgSpec::Taint::None;
    } else if (tj.is_string()) {
      auto s = tj.get<std::string>();
      if (s == "all")
        a.taint = ArgSpec::Taint::All;
      else if (s == "none")
        a.taint = ArgSpec::Taint::None;
      else
        throw HarnessError(where + "taint must be 'all', 'none', a boolean or a byte mask");
    } else if (tj.is_array()) {
      a.taint = ArgSpec::Taint::Mask;
      for (const auto& b : tj) {
        if (!b.is_number_integer() && !b.is_boolean())
          throw HarnessError(where + "taint mask entries must be 0 or 1");
        a.mask.push_back(b.is_boolean() ? b.get<bool>() : b.get<int>() != 0);
      }
    } else {
      throw HarnessError(where + "taint must be 'all', 'none', a boolean or a byte mask");
    }
  }
  return a;
}

}  // namespace

Harness parse_harness(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw HarnessError(std::string("harness is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw HarnessError("harness must be a JSON object");
  Harness h;
  try {
    if (!j.contains("entry") || !j["entry"].is_string()) throw HarnessError("missing 'entry'");
    h.entry = j["entry"].get<std::string>();
    if (j.contains("seed")) h.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("max_steps")) h.max_steps = j["max_steps"].get<std::uint64_t>();
    if (j.contains("args")) {
      if (!j["args"].is_array()) throw HarnessError("'args' must be a list");
      for (std::size_t i = 0; i < j["args"].size(); ++i) h.args.push_back(parse_arg(j["args"][i], i));
    }
  } catch (const json::exception& e) {
    throw HarnessError(std::string("bad harness field: ") + e.what());
  }
  return h;
}

Harness load_harness(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw HarnessError("cannot read harness " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_harness(buf.str());
}

std::string harness_to_json(const Harness& h) {
  json j;
  j["entry"] = h.entry;
  j["seed"] = h.seed;
  j["max_steps"] = h.max_steps;
  j["args"] = json::array();
  for (const auto& a : h.args) {
    json aj;
    aj["type"] = a.type.str();
    if (!a.values.empty()) aj["value"] = a.values;
    if (a.generator) aj["generator"] = {{"min", a.generator->min}, {"max", a.generator->max}};
    switch (a.taint) {
      case ArgSpec::Taint::None: aj["taint"] = "none"; break;
      case ArgSpec::Taint::All: aj["taint"] = "all"; break;
      case ArgSpec::Taint::Mask: {
        std::vector<int> m;
        for (bool b : a.mask) m.push_back(b ? 1 : 0);
        aj["taint"] = m;
        break;
      }
    }
    j["args"].push_back(std::move(aj));
  }
  return j.dump(2);
}

std::vector<std::string> check_harness(const ir::Module& m, const Harness& h) {
  std::vector<std::string> errs;
  const ir::Function* f = m.find_function(h.entry);
  if (!f) {
    errs.push_back("entry function '" + h.entry + "' not found");
    return errs;
  }
  if (f->params.size() != h.args.size()) {
    errs.push_back("entry '" + h.entry + "' takes " + std::to_string(f->params.size()) +
                   " arguments, harness gives " + std::to_string(h.args.size()));
    return errs;
  }
  for (std::size_t i = 0; i < h.args.size(); ++i) {
    const auto& p = f->params[i];
    const auto& a = h.args[i];
    const std::string where = "argument " + std::to_string(i) + " (%" + p.name + "): ";
    auto leaves = ir::scalar_leaves(a.type);
    if (p.type.is_ptr()) {
      if (a.type.is_void()) errs.push_back(where + "object type cannot be void");
      for (const auto& [off, lt] : leaves)
        if (lt.is_ptr()) {
          errs.push_back(where + "harness objects cannot contain addresses");
          break;
        }
    } else if (a.type != p.type) {
      errs.push_back(where + "type " + a.type.str() + " does not match parameter type " +
                     p.type.str());
    }
    if (!a.values.empty() && a.values.size() != leaves.size())
      errs.push_back(where + "expected " + std::to_string(leaves.size()) + " values, got " +
                     std::to_string(a.values.size()));
    if (a.taint == ArgSpec::Taint::Mask && a.mask.size() != a.type.size())
      errs.push_back(where + "taint mask has " + std::to_string(a.mask.size()) +
                     " entries for a " + std::to_string(a.type.size()) + "-byte value");
    if (a.tainted() && !p.blinded)
      errs.push_back(where + "only parameters annotated 'blinded' may carry taint");
  }
  return errs;
}

Harness materialize(const Harness& h) {
  Harness out = h;
  std::mt19937_64 rng(h.seed);
  for (auto& a : out.args) {
    if (!a.values.empty() || !a.generator) continue;
    std::uniform_int_distribution<std::int64_t> dist(a.generator->min, a.generator->max);
    std::size_t n = ir::scalar_leaves(a.type).size();
    for (std::size_t i = 0; i < n; ++i) a.values.push_back(dist(rng));
  }
  return out;
}

Harness without_taint(const Harness& h) {
  Harness out = h;
  for (auto& a : out.args) {
    a.taint = ArgSpec::Taint::None;
    a.mask.clear();
  }
  return out;
}

}  // namespace oblint::dynoracle
