#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "thetafix/definitions.hpp"
#include "thetafix/expression.hpp"

namespace thetafix {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

const json& field(const json& j, const std::string& key) {
  if (!j.contains(key)) bad("problem", "missing field '" + key + "'");
  return j.at(key);
}

double real_of(const json& j, const std::string& path) {
  try {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_real(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
  bad(path, "expected a number or constant expression");
}

Expression expr_of(const json& j, const std::string& path) {
  try {
    if (j.is_number()) return Expression::constant(j.get<double>());
    if (j.is_string()) return Expression::parse(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
  bad(path, "expected a number or expression");
}

// {"form": "power-exp", "c": ..., "k": ...} is c * t^k * e^-x.
Expression g_term(const json& j, const std::string& path) {
  if (!j.is_object()) return expr_of(j, path);
  const std::string form = j.value("form", std::string{});
  if (form != "power-exp") bad(path + ".form", "unknown g form '" + form + "' (power-exp)");
  const double c = real_of(j.contains("c") ? j.at("c") : json(1.0), path + ".c");
  const double k = real_of(j.contains("k") ? j.at("k") : json(0.0), path + ".k");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g*t^%.17g*exp(-x)", c, k);
  return Expression::parse(buf);
}

std::vector<Expression> expr_list(const json& arr, const std::string& path, bool g_forms) {
  if (!arr.is_array()) bad(path, "expected a list");
  std::vector<Expression> out;
  for (std::size_t i = 0; const auto& e : arr) {
    const std::string p = path + "[" + std::to_string(i++) + "]";
    out.push_back(g_forms ? g_term(e, p) : expr_of(e, p));
  }
  return out;
}

}  // namespace

FdeProblem parse_problem_definition(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad("problem definition", e.what());
  }
  if (!j.is_object()) bad("problem definition", "expected an object");
  try {
    FdeProblem pb;
    pb.name = j.value("name", std::string("problem"));
    pb.beta = real_of(field(j, "beta"), "beta");
    pb.t0 = real_of(field(j, "t0"), "t0");
    pb.T = real_of(field(j, "T"), "T");
    pb.alpha = real_of(field(j, "alpha"), "alpha");
    for (std::size_t i = 0; const auto& a : field(j, "a")) pb.a.push_back(real_of(a, "a[" + std::to_string(i++) + "]"));
    pb.g = expr_list(field(j, "g"), "g", true);
    const json& F = field(j, "F");
    if (!F.contains("lo") || !F.contains("hi")) bad("F", "needs lo and hi");
    pb.F_lo = expr_of(F.at("lo"), "F.lo");
    pb.F_hi = expr_of(F.at("hi"), "F.hi");
    pb.m = expr_of(field(j, "m"), "m");
    pb.p = expr_list(field(j, "p"), "p", false);
    pb.tau = real_of(field(j, "tau"), "tau");
    if (j.contains("M")) pb.M = j.at("M").get<int>();
    if (j.contains("state_range")) {
      const json& s = j.at("state_range");
      if (!s.is_array() || s.size() != 2) bad("state_range", "expected [lo, hi]");
      pb.state_range = {real_of(s[0], "state_range[0]"), real_of(s[1], "state_range[1]")};
    }
    if (pb.m.uses_x()) bad("m", "must depend on t only");
    for (std::size_t k = 0; k < pb.p.size(); ++k) {
      if (pb.p[k].uses_x()) bad("p[" + std::to_string(k) + "]", "must depend on t only");
    }
    pb.validate();
    return pb;
  } catch (const json::exception& e) {
    bad("problem definition", e.what());
  }
}

}  // namespace thetafix
