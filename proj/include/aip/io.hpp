#pragma once

// JSON I/O for bodies, ellipses, point functions and reports, plus the body
// description mini-language used by the command line tool.
//
// Needs nlohmann's single header "json.hpp" on the include path. Numbers are
// written with 17 significant digits by a small custom serializer so output
// is byte-identical across runs and platforms.

#include "aip/counterexample.hpp"
#include "aip/duality.hpp"
#include "aip/regions.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace aip {

using Json = nlohmann::ordered_json;

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_json(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << close << '}';
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ',';
        if (!flat) os << nl << pad;
        first = false;
        write_json(os, e, indent, depth + 1);
      }
      if (!flat) os << nl << close;
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Serializes with %.17g numbers; indent 0 gives a single line.
inline std::string to_text(const Json& j, int indent = 2) {
  std::ostringstream os;
  detail::write_json(os, j, indent, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Value conversions

inline Json to_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

inline Json to_json(const Polygon& p) {
  Json verts = Json::array();
  for (const auto& v : p.vertices()) verts.push_back(to_json(v));
  return {{"dim", 2}, {"kind", "polygon"}, {"vertices", verts}};
}

inline Json to_json(const Ellipse& e) {
  const Mat2& l = e.shape;
  return {{"kind", "ellipse"},
          {"center", to_json(e.center)},
          {"shape", Json::array({Json::array({l(0, 0), l(0, 1)}), Json::array({l(1, 0), l(1, 1)})})}};
}

inline Json to_json(const PointFunction& pf) {
  Json j = {{"id", pf.name()}};
  if (pf.id == PointId::capfamily) {
    j["eps"] = pf.eps;
    j["delta"] = pf.delta;
  }
  return j;
}

inline Json to_json(const Region& r) {
  Json j = to_json(r.polygon);
  j.erase("dim");
  j["meta"] = {{"rays", r.rays}, {"param", r.param}, {"grid_error", r.grid_error}, {"origin", to_json(r.origin)}};
  return j;
}

inline Json to_json(const JohnCertificate& c) {
  Json contacts = Json::array();
  for (const auto& k : c.contacts) contacts.push_back({{"u", to_json(k.direction)}, {"weight", k.weight}});
  return {{"contacts", contacts},
          {"detected", c.detected},
          {"residual_sum", to_json(c.residual_sum)},
          {"residual_identity", c.residual_identity},
          {"contained", c.contained},
          {"passed", c.passed}};
}

inline Json to_json(const DualityReport& r) {
  Json per = Json::array();
  for (const auto& b : r.per_body) {
    Json e = {{"relative", b.relative}, {"absolute", b.absolute}};
    if (b.failed) e["error"] = b.error;
    per.push_back(e);
  }
  Json j = {{"p", r.p},
            {"q", r.q},
            {"bodies_tested", r.bodies_tested},
            {"failures", r.failures},
            {"max_residual", r.max_residual},
            {"max_abs_residual", r.max_abs_residual},
            {"worst_body", r.worst_body}};
  if (!r.first_error.empty()) j["first_error"] = r.first_error;
  j["per_body"] = per;
  return j;
}

inline Json to_json(const NonInjectivityCertificate& c) {
  Json w = Json::array();
  for (const auto& x : c.witnesses) w.push_back({{"z", to_json(x.z)}, {"residual", x.residual}});
  Json j = {{"eta", c.eta},
            {"eps", c.eps},
            {"delta", c.delta},
            {"alpha_closed", c.alpha_closed},
            {"alpha_geometric", c.alpha_geometric},
            {"residual_sym", c.residual_sym},
            {"residual_eta", c.residual_eta},
            {"delta_in_range", c.delta_in_range},
            {"disjoint", c.disjoint},
            {"disjoint_geometric", c.disjoint_geometric},
            {"cap_areas_closed", Json::array({c.areas_closed.a, c.areas_closed.b})},
            {"cap_areas_geometric", Json::array({c.areas_geometric.a, c.areas_geometric.b})},
            {"f_displayed", c.f_displayed},
            {"moment_balance", c.balance},
            {"witnesses", w},
            {"passed", c.passed}};
  if (!c.failure.empty()) j["failure"] = c.failure;
  return j;
}

// ---------------------------------------------------------------------------
// Parsing

inline Vec2 vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected a point [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Polygon polygon_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("body must be a JSON object");
  if (j.contains("dim") && j["dim"] != 2) throw ParseError("only dim 2 bodies are supported");
  if (j.contains("kind") && j["kind"] != "polygon") throw ParseError("body kind must be \"polygon\"");
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw ParseError("body needs a \"vertices\" array");
  std::vector<Vec2> pts;
  for (const auto& v : j["vertices"]) pts.push_back(vec_from_json(v));
  return canonicalize(pts);
}

inline Ellipse ellipse_from_json(const Json& j) {
  if (!j.is_object() || j.value("kind", "") != "ellipse") throw ParseError("expected an ellipse object");
  const Json& s = j.at("shape");
  if (!s.is_array() || s.size() != 2) throw ParseError("shape must be a 2x2 array");
  Mat2 l;
  for (int r = 0; r < 2; ++r) {
    const Vec2 row = vec_from_json(s[static_cast<std::size_t>(r)]);
    l.row(r) = row.transpose();
  }
  return {vec_from_json(j.at("center")), l};
}

inline PointFunction point_function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("id")) throw ParseError("point function needs an \"id\"");
  const PointId id = point_id_from_string(j["id"].get<std::string>());
  if (id == PointId::capfamily) return PointFunction::caps(j.at("eps").get<double>(), j.at("delta").get<double>());
  return PointFunction::of(id);
}

inline std::vector<double> split_numbers(std::string_view s, char sep = ',') {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t end = std::min(s.find(sep, pos), s.size());
    const std::string tok(s.substr(pos, end - pos));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParseError("not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError("not a number: '" + tok + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

inline Vec2 parse_point(std::string_view s) {
  const auto v = split_numbers(s);
  if (v.size() != 2) throw ParseError("expected a point x,y");
  return {v[0], v[1]};
}

/// "a11,a12,a21,a22,b1,b2"
inline AffineMap parse_affine(std::string_view s) {
  const auto v = split_numbers(s);
  if (v.size() != 6) throw ParseError("affine map needs six numbers a11,a12,a21,a22,b1,b2");
  Mat2 a;
  a << v[0], v[1], v[2], v[3];
  return {a, Vec2(v[4], v[5])};
}

inline Polygon regular_ngon(int m) {
  if (m < 3) throw BadParams("ngon needs at least 3 vertices");
  std::vector<Vec2> pts;
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * std::numbers::pi * k / m;
    pts.emplace_back(std::cos(t), std::sin(t));
  }
  return canonicalize(pts);
}

inline Polygon simplex_body() { return canonicalize({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}); }

inline Polygon read_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open body file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return polygon_from_json(j);
}

/// Body generators: square, cross, simplex, ngon:M, kab:A,B, beta:ETA,
/// random:K:SEED (hull of K uniform disk points), file:PATH.
inline Polygon parse_body(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw ParseError("body '" + std::string(kind) + "' needs an argument");
  };
  auto no_arg = [&] {
    if (colon != std::string_view::npos) throw ParseError("body '" + std::string(kind) + "' takes no argument");
  };
  try {
    if (kind == "square") {
      no_arg();
      return square_body();
    }
    if (kind == "cross") {
      no_arg();
      return cross_body();
    }
    if (kind == "simplex") {
      no_arg();
      return simplex_body();
    }
    if (kind == "file") {
      need_arg();
      return read_body_file(std::string(arg));
    }
    need_arg();
    if (kind == "ngon") {
      const auto v = split_numbers(arg);
      if (v.size() != 1 || v[0] != std::floor(v[0]) || v[0] > 1e6) throw ParseError("ngon:M needs an integer M");
      return regular_ngon(static_cast<int>(v[0]));
    }
    if (kind == "kab") {
      const auto v = split_numbers(arg);
      if (v.size() != 2) throw ParseError("kab:A,B needs two numbers");
      return body_kab(v[0], v[1]);
    }
    if (kind == "beta") {
      const auto v = split_numbers(arg);
      if (v.size() != 1) throw ParseError("beta:ETA needs one number");
      return b_eta(v[0]);
    }
    if (kind == "random") {
      const auto v = split_numbers(arg, ':');
      if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) || v[1] < 0 || v[0] > 1e6)
        throw ParseError("random:K:SEED needs two integers");
      if (v[0] < 3) throw BadParams("random body needs K >= 3");
      Rng rng(static_cast<std::uint64_t>(v[1]));
      return random_hull(rng, static_cast<int>(v[0]));
    }
  } catch (const DegenerateInput& e) {
    throw ParseError(std::string("degenerate body: ") + e.what());
  }
  throw ParseError("unknown body kind '" + std::string(kind) + "'");
}

// ---------------------------------------------------------------------------
// SVG

struct SvgLayer {
  const Polygon* polygon;
  std::string stroke;
  std::string fill = "none";
};

/// Static picture of polygons (first layer drawn first) and marker points.
inline std::string to_svg(const std::vector<SvgLayer>& layers, const std::vector<Vec2>& points = {}) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  auto grow = [&](const Vec2& v) {
    x0 = std::min(x0, v.x()), y0 = std::min(y0, v.y()), x1 = std::max(x1, v.x()), y1 = std::max(y1, v.y());
  };
  for (const auto& l : layers)
    for (const auto& v : l.polygon->vertices()) grow(v);
  for (const auto& v : points) grow(v);
  const double span = std::max(x1 - x0, y1 - y0), pad = 0.05 * span, size = 512.0;
  const double s = size / (span + 2 * pad);
  auto px = [&](const Vec2& v) {
    return format_number((v.x() - x0 + pad) * s) + "," + format_number((y1 - v.y() + pad) * s);
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number((x1 - x0 + 2 * pad) * s)
     << "\" height=\"" << format_number((y1 - y0 + 2 * pad) * s) << "\">\n";
  for (const auto& l : layers) {
    os << "  <polygon fill=\"" << l.fill << "\" stroke=\"" << l.stroke << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < l.polygon->size(); ++i) os << (i ? " " : "") << px((*l.polygon)[i]);
    os << "\"/>\n";
  }
  for (const auto& v : points) {
    const auto c = px(v);
    const auto comma = c.find(',');
    os << "  <circle cx=\"" << c.substr(0, comma) << "\" cy=\"" << c.substr(comma + 1) << "\" r=\"3\" fill=\"black\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

}  // namespace aip
