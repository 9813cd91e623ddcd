#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
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

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) bad(path, "missing field '" + key + "'");
  return j.at(key);
}

// Numbers may be written as JSON numbers or constant expressions ("8/9").
double real_of(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_real(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      bad(path, e.what());
    }
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

MetricRule parse_metric(const json& j, const std::string& path) {
  const std::string kind = field(j, "kind", path).get<std::string>();
  if (kind == "absolute-difference") return MetricRule::absolute_difference();
  if (kind == "core-max") {
    double lo = 0.0, hi = 2.0;
    if (j.contains("core")) {
      const json& c = j.at("core");
      if (!c.is_array() || c.size() != 2) bad(path + ".core", "expected [lo, hi]");
      lo = real_of(c[0], path + ".core[0]");
      hi = real_of(c[1], path + ".core[1]");
    }
    return MetricRule::core_max(lo, hi);
  }
  if (kind == "table") {
    std::vector<double> pts;
    for (std::size_t i = 0; const auto& p : field(j, "points", path)) {
      pts.push_back(real_of(p, path + ".points[" + std::to_string(i++) + "]"));
    }
    std::vector<std::vector<double>> mat;
    for (const auto& row : field(j, "matrix", path)) {
      std::vector<double> r;
      for (const auto& v : row) r.push_back(real_of(v, path + ".matrix"));
      mat.push_back(std::move(r));
    }
    try {
      return MetricRule::table(std::move(pts), std::move(mat));
    } catch (const std::invalid_argument& e) {
      bad(path, e.what());
    }
  }
  bad(path + ".kind", "unknown metric '" + kind + "' (absolute-difference | core-max | table)");
}

Carrier parse_carrier(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "real-line") return Carrier::real_line();
    bad(path, "unknown carrier '" + j.get<std::string>() + "'");
  }
  Carrier c;
  if (j.contains("intervals")) {
    for (std::size_t i = 0; const auto& iv : j.at("intervals")) {
      const std::string p = path + ".intervals[" + std::to_string(i++) + "]";
      if (!iv.is_array() || iv.size() != 2) bad(p, "expected [lo, hi]");
      const double lo = real_of(iv[0], p), hi = real_of(iv[1], p);
      if (!(lo <= hi)) bad(p, "needs lo <= hi");
      c.intervals.emplace_back(lo, hi);
    }
  }
  if (j.contains("lattice")) {
    const json& l = j.at("lattice");
    c.lattice = Lattice{real_of(field(l, "start", path + ".lattice"), path + ".lattice.start"),
                        real_of(field(l, "step", path + ".lattice"), path + ".lattice.step")};
    if (!(c.lattice->step > 0.0)) bad(path + ".lattice.step", "must be > 0");
  }
  if (j.contains("points")) {
    for (const auto& p : j.at("points")) c.points.push_back(real_of(p, path + ".points"));
  }
  if (c.intervals.empty() && !c.lattice && c.points.empty()) bad(path, "carrier is empty");
  return c;
}

struct Condition {
  enum class Op { Equals, Above, AtLeast, Below, AtMost } op;
  double v;
  bool holds(double x) const {
    switch (op) {
      case Op::Equals: return x == v;
      case Op::Above: return x > v;
      case Op::AtLeast: return x >= v;
      case Op::Below: return x < v;
      case Op::AtMost: return x <= v;
    }
    return false;
  }
};

struct ImageRule {
  enum class Kind { Points, Interval, Progression } kind;
  std::vector<Expression> exprs;  // points | lo, hi | start, step, stop

  CompactSet eval(double x) const {
    switch (kind) {
      case Kind::Points: {
        std::vector<double> v;
        for (const auto& e : exprs) v.push_back(e(x));
        return CompactSet::finite(std::move(v));
      }
      case Kind::Interval: return CompactSet::interval(exprs[0](x), exprs[1](x));
      case Kind::Progression: {
        const double start = exprs[0](x), step = exprs[1](x), stop = exprs[2](x);
        if (!(step > 0.0)) throw DomainError("progression step must be > 0");
        std::vector<double> v;
        for (long i = 0;; ++i) {
          const double p = start + static_cast<double>(i) * step;
          if (p > stop + 1e-12 * std::max(1.0, std::fabs(stop))) break;
          v.push_back(p);
        }
        if (v.empty()) throw DomainError("progression is empty at x = " + format_real(x));
        return CompactSet::finite(std::move(v));
      }
    }
    throw DomainError("bad image rule");
  }
};

struct Piece {
  std::string label;
  std::vector<Condition> when;
  ImageRule image;
  bool matches(double x) const {
    for (const auto& c : when)
      if (!c.holds(x)) return false;
    return true;
  }
};

ImageRule parse_image(const json& j, const std::string& path) {
  ImageRule r{};
  auto list = [&](const json& arr, const std::string& p) {
    std::vector<Expression> out;
    for (std::size_t i = 0; const auto& e : arr) out.push_back(expr_of(e, p + "[" + std::to_string(i++) + "]"));
    return out;
  };
  if (j.contains("points")) {
    r.kind = ImageRule::Kind::Points;
    r.exprs = list(j.at("points"), path + ".points");
    if (r.exprs.empty()) bad(path + ".points", "needs at least one point");
  } else if (j.contains("interval")) {
    r.kind = ImageRule::Kind::Interval;
    r.exprs = list(j.at("interval"), path + ".interval");
    if (r.exprs.size() != 2) bad(path + ".interval", "expected [lo, hi]");
  } else if (j.contains("progression")) {
    const json& p = j.at("progression");
    const std::string pp = path + ".progression";
    r.kind = ImageRule::Kind::Progression;
    r.exprs = {expr_of(field(p, "start", pp), pp + ".start"), expr_of(field(p, "step", pp), pp + ".step"),
               expr_of(field(p, "stop", pp), pp + ".stop")};
  } else {
    bad(path, "image needs one of points | interval | progression");
  }
  return r;
}

std::vector<Piece> parse_pieces(const json& arr, const std::string& path) {
  std::vector<Piece> out;
  for (std::size_t i = 0; const auto& pj : arr) {
    const std::string p = path + "[" + std::to_string(i++) + "]";
    Piece piece;
    piece.label = pj.value("label", std::string{});
    if (pj.contains("when")) {
      static const std::pair<const char*, Condition::Op> ops[] = {{"equals", Condition::Op::Equals},
                                                                  {"above", Condition::Op::Above},
                                                                  {"at_least", Condition::Op::AtLeast},
                                                                  {"below", Condition::Op::Below},
                                                                  {"at_most", Condition::Op::AtMost}};
      for (const auto& [key, val] : pj.at("when").items()) {
        bool known = false;
        for (const auto& [name, op] : ops) {
          if (key == name) {
            piece.when.push_back({op, real_of(val, p + ".when." + key)});
            known = true;
          }
        }
        if (!known) bad(p + ".when", "unknown condition '" + key + "'");
      }
    }
    piece.image = parse_image(field(pj, "image", p), p + ".image");
    out.push_back(std::move(piece));
  }
  if (out.empty()) bad(path, "needs at least one piece");
  return out;
}

}  // namespace

MapDefinition parse_map_definition(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad("map definition", e.what());
  }
  if (!j.is_object()) bad("map definition", "expected an object");
  try {
    MapDefinition def;
    def.name = j.value("name", std::string("map"));
    def.space.rule = parse_metric(field(j, "metric", "map"), "metric");
    def.space.carrier = parse_carrier(field(j, "carrier", "map"), "carrier");

    if (j.contains("pieces")) {
      auto pieces = std::make_shared<const std::vector<Piece>>(parse_pieces(j.at("pieces"), "pieces"));
      def.map.rule = [pieces](double x) {
        for (const auto& p : *pieces)
          if (p.matches(x)) return p.image.eval(x);
        throw DomainError("no piece of the map covers x = " + format_real(x));
      };
      def.map.stratum = [pieces](double x) {
        for (const auto& p : *pieces)
          if (p.matches(x)) return p.label;
        return std::string{};
      };
    } else if (j.contains("table")) {
      auto table = std::make_shared<std::vector<std::pair<double, ImageRule>>>();
      for (std::size_t i = 0; const auto& row : j.at("table")) {
        const std::string p = "table[" + std::to_string(i++) + "]";
        table->emplace_back(real_of(field(row, "x", p), p + ".x"), parse_image(field(row, "image", p), p + ".image"));
      }
      def.map.rule = [table](double x) {
        for (const auto& [key, img] : *table)
          if (key == x) return img.eval(x);
        throw DomainError("table map has no row for x = " + format_real(x));
      };
    } else {
      bad("map", "needs 'pieces' or 'table'");
    }
    def.map.name = def.name;
    def.map.compact_valued = j.value("compact_valued", true);

    if (j.contains("sampling")) {
      const json& s = j.at("sampling");
      def.sampling.interval_nodes = s.value("interval_nodes", def.sampling.interval_nodes);
      if (s.contains("lattice_ceiling")) def.sampling.lattice_ceiling = real_of(s.at("lattice_ceiling"), "sampling.lattice_ceiling");
      def.sampling.random_points = s.value("random_points", 0);
      if (s.contains("line_range")) {
        def.sampling.line_lo = real_of(s.at("line_range").at(0), "sampling.line_range[0]");
        def.sampling.line_hi = real_of(s.at("line_range").at(1), "sampling.line_range[1]");
      }
      if (def.sampling.interval_nodes < 2) bad("sampling.interval_nodes", "must be >= 2");
    }
    if (j.contains("pairs")) {
      for (std::size_t i = 0; const auto& pr : j.at("pairs")) {
        const std::string p = "pairs[" + std::to_string(i++) + "]";
        if (!pr.is_array() || pr.size() != 2) bad(p, "expected [x, y]");
        def.pairs.emplace_back(real_of(pr[0], p), real_of(pr[1], p));
      }
    }
    if (j.contains("reference_values")) {
      for (std::size_t i = 0; const auto& rv : j.at("reference_values")) {
        const std::string p = "reference_values[" + std::to_string(i++) + "]";
        ReferenceValue r;
        r.label = rv.value("label", p);
        r.x = real_of(field(rv, "x", p), p + ".x");
        r.y = real_of(field(rv, "y", p), p + ".y");
        const json& h = field(rv, "H", p);
        r.H = real_of(h, p + ".H");
        r.H_text = h.is_string() ? h.get<std::string>() : format_real(r.H);
        if (rv.contains("u")) r.u = real_of(rv.at("u"), p + ".u");
        def.reference_values.push_back(std::move(r));
      }
    }
    return def;
  } catch (const json::exception& e) {
    bad("map definition", e.what());
  }
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

MapDefinition load_map_definition(const std::string& path) { return parse_map_definition(read_file(path)); }

FdeProblem load_problem_definition(const std::string& path) { return parse_problem_definition(read_file(path)); }

}  // namespace thetafix
