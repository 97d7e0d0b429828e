#pragma once

// Command line front end. run_cli() is separate from main() so the test
// suite can drive it with captured streams.
//
// Exit codes: 0 success or check passed, 1 check failed or numerical
// failure, 2 usage error (bad flags, unparsable bodies, invalid parameters).

#include "aip/io.hpp"

#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"

namespace aip::cli {

struct Options {
  std::string body = "square";
  std::string map;
  std::string svg;
  std::uint64_t seed = 1;
  int trials = 20;
  int jobs = 1;
  std::optional<double> tol;

  std::string id = "centroid";
  std::string p = "centroid", q = "santalo", r = "centroid,john,symcore";
  std::optional<double> eps, delta, eta;
  std::string at, z, init, center;
  bool absolute = false;
  bool compose = false;
  std::string kind;
  std::optional<double> param;
  int rays = 256;
  int steps = 5;
};

class Usage : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Polygon load_body(const Options& o) {
  Polygon b = parse_body(o.body);
  if (!o.map.empty()) b = affine_apply(parse_affine(o.map), b);
  return b;
}

inline PointFunction make_point(const std::string& name, const Options& o) {
  const PointId id = point_id_from_string(name);
  if (id != PointId::capfamily) return PointFunction::of(id);
  if (o.eps && o.delta) return PointFunction::caps(*o.eps, *o.delta);
  if (o.eta) {
    const double e = o.eps ? *o.eps : default_eps(*o.eta);
    return PointFunction::caps(e, solve_delta(*o.eta, e));
  }
  throw Usage("capfamily needs --eps and --delta, or --eta");
}

inline void maybe_svg(const Options& o, const std::vector<SvgLayer>& layers, const std::vector<Vec2>& pts = {}) {
  if (!o.svg.empty()) write_file(o.svg, to_svg(layers, pts));
}

inline void check_counts(const Options& o) {
  if (o.trials < 1) throw Usage("--trials must be >= 1");
  if (o.jobs < 1) throw Usage("--jobs must be >= 1");
}

inline std::vector<Polygon> suite_bodies(const Options& o, bool explicit_body) {
  if (explicit_body) return {load_body(o)};
  return random_bodies(o.seed, static_cast<std::size_t>(o.trials));
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the exit code and fills `out`.

inline int cmd_point(const Options& o, Json& out) {
  const Polygon b = load_body(o);
  const PointFunction pf = make_point(o.id, o);
  const PointResult r = eval_point(pf, b);
  out = {{"point", to_json(pf)}, {"value", to_json(r.value)}, {"iterations", r.iterations}, {"residual", r.residual}};
  maybe_svg(o, {{&b, "black"}}, {r.value});
  return 0;
}

inline int cmd_polar(const Options& o, Json& out) {
  const Polygon b = load_body(o);
  const Vec2 z = o.at.empty() ? Vec2::Zero() : parse_point(o.at);
  const Polygon pol = o.absolute ? polar_at(b, z) : polar_about(b, z);
  out = to_json(pol);
  maybe_svg(o, {{&b, "black"}, {&pol, "steelblue"}}, {z});
  return 0;
}

inline int cmd_shift(const Options& o, Json& out) {
  const Polygon b = load_body(o);
  const Polygon s = k_sub_z(b, parse_point(o.z));
  out = to_json(s);
  maybe_svg(o, {{&b, "black"}, {&s, "steelblue"}});
  return 0;
}

inline int cmd_ellipse(const Options& o, Json& out) {
  const Polygon b = load_body(o);
  const bool john = o.kind == "john";
  SolverInfo info;
  Ellipse e;
  int code = 0;
  if (!o.center.empty()) {
    const Vec2 x = parse_point(o.center);
    e = john ? john_ellipse_centered(b, x, &info) : loewner_ellipse_centered(b, x, &info);
    out = {{"ellipse", to_json(e)}, {"area", e.area()}};
    if (john)
      out["f"] = max_centered_area(b, x);
    else
      out["lambda"] = min_centered_inverse_area(b, x);
  } else {
    e = john ? john_ellipse(b, &info) : loewner_ellipse(b, &info);
    out = {{"ellipse", to_json(e)}, {"area", e.area()}};
    try {
      const JohnCertificate c = verify_john_conditions(b, e, john ? ContactMode::inscribed : ContactMode::enclosing);
      out["certificate"] = to_json(c);
      if (!c.passed) code = 1;
    } catch (const NoContacts& err) {
      out["certificate"] = {{"passed", false}, {"error", err.what()}};
      code = 1;
    }
  }
  out["iterations"] = info.iterations;
  out["gap"] = info.gap;
  if (!o.svg.empty()) {
    const auto pts = e.sample(256);
    const Polygon ep = canonicalize(pts);
    maybe_svg(o, {{&b, "black"}, {&ep, "firebrick"}}, {e.center});
  }
  return code;
}

inline int cmd_region(const Options& o, Json& out) {
  const Polygon b = load_body(o);
  if (!o.param) throw Usage("region needs --param");
  detail::check_rays(o.rays);
  const double t = *o.param;
  const Region r = [&] {
    if (o.kind == "floating") return floating_body(b, t, o.rays);
    if (o.kind == "illumination") return illumination_body(b, t, o.rays);
    if (o.kind == "santalo") return santalo_region(b, t, o.rays);
    if (o.kind == "john") return john_region(b, t, o.rays);
    return symcore_region(b, t, o.rays);
  }();
  out = to_json(r);
  maybe_svg(o, {{&b, "black"}, {&r.polygon, "darkgreen"}}, {r.origin});
  return 0;
}

inline int cmd_dual_check(const Options& o, Json& out, bool explicit_body) {
  check_counts(o);
  const PointFunction p = make_point(o.p, o), q = make_point(o.q, o);
  const auto bodies = suite_bodies(o, explicit_body);
  const DualityReport rep = dual_residual(p, q, bodies, o.jobs);
  const double tol = o.tol.value_or(1e-6);
  const bool pass = rep.failures == 0 && rep.max_residual < tol;
  out = to_json(rep);
  out["seed"] = o.seed;
  out["tolerance"] = tol;
  out["passed"] = pass;
  return pass ? 0 : 1;
}

inline std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t end = std::min(s.find(',', pos), s.size());
    out.push_back(s.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

inline int cmd_product_check(const Options& o, Json& out, bool explicit_body) {
  check_counts(o);
  const PointMap p = as_map(make_point(o.p, o)), q = as_map(make_point(o.q, o));
  std::vector<PointFunction> rs;
  for (const auto& n : split_names(o.r)) rs.push_back(make_point(n, o));
  const auto bodies = suite_bodies(o, explicit_body);
  const std::size_t nr = rs.size();
  struct Cell {
    double residual = 0.0;
    std::string error;
  };
  const auto cells = parallel_map<Cell>(bodies.size() * nr, o.jobs, [&](std::size_t i) {
    const Polygon& k = bodies[i / nr];
    const PointMap r = as_map(rs[i % nr]);
    Cell c;
    try {
      const PointMap pq = product(p, q, r);
      const PointMap lhs = o.compose ? product(q, p, pq) : pq;
      c.residual = (lhs(k) - r(k)).norm() / diameter(k);
    } catch (const Error& e) {
      c.error = e.what();
    }
    return c;
  });
  Json per = Json::array();
  double worst = 0.0;
  std::size_t worst_body = 0, failures = 0;
  std::string first_error;
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    Json row = Json::array();
    for (std::size_t k = 0; k < nr; ++k) {
      const Cell& c = cells[b * nr + k];
      if (!c.error.empty()) {
        if (failures++ == 0) first_error = c.error;
        row.push_back(nullptr);
        continue;
      }
      row.push_back(c.residual);
      if (c.residual > worst) worst = c.residual, worst_body = b;
    }
    per.push_back(row);
  }
  const double tol = o.tol.value_or(1e-5);
  const bool pass = failures == 0 && worst < tol;
  Json names = Json::array();
  for (const auto& r : rs) names.push_back(r.name());
  out = {{"p", o.p},       {"q", o.q},           {"r", names},
         {"compose", o.compose}, {"bodies_tested", bodies.size()}, {"failures", failures},
         {"max_residual", worst}, {"worst_body", worst_body}, {"seed", o.seed},
         {"tolerance", tol}};
  if (!first_error.empty()) out["first_error"] = first_error;
  out["per_body"] = per;
  out["passed"] = pass;
  return pass ? 0 : 1;
}

inline int cmd_invariance(const Options& o, Json& out) {
  check_counts(o);
  const Polygon b = load_body(o);
  const PointFunction pf = make_point(o.id, o);
  const double dev = invariance_check(pf, b, o.trials, o.seed, o.jobs);
  const double tol = o.tol.value_or(1e-6);
  out = {{"point", to_json(pf)}, {"trials", o.trials}, {"seed", o.seed}, {"max_deviation", dev},
         {"tolerance", tol},     {"passed", dev < tol}};
  return dev < tol ? 0 : 1;
}

inline int cmd_preimage(const Options& o, Json& out) {
  const Polygon c = load_body(o);
  const PointFunction pf = make_point(o.id, o);
  const Vec2 init = o.init.empty() ? centroid(c) : parse_point(o.init);
  const PointResult r = polar_preimage(pf, c, init);
  out = {{"point", to_json(pf)},      {"init", to_json(init)}, {"z", to_json(r.value)},
         {"residual", r.residual}, {"iterations", r.iterations}};
  maybe_svg(o, {{&c, "black"}}, {init, r.value});
  return 0;
}

inline int cmd_counterexample(const Options& o, Json& out) {
  const double eta = o.eta.value_or(0.5);
  check_eta(eta);
  const double eps = o.eps.value_or(default_eps(eta));
  NonInjectivityCertificate c;
  if (o.delta) {
    c = evaluate_certificate(eta, eps, *o.delta);
  } else {
    double delta = 0.0;
    try {
      delta = solve_delta(eta, eps);
    } catch (const NoRoot& e) {
      out = {{"eta", eta}, {"eps", eps}, {"passed", false}, {"failure", e.what()}};
      return 1;
    }
    c = evaluate_certificate(eta, eps, delta);
  }
  out = to_json(c);
  return c.passed ? 0 : 1;
}

inline int cmd_iterate_product(const Options& o, Json& out) {
  const Polygon b = load_body(o);
  const PointFunction pf = make_point(o.id, o);
  if (o.steps < 1) throw Usage("--steps must be >= 1");
  const auto pts = iterate_product(pf, b, o.steps);
  Json arr = Json::array();
  for (const auto& v : pts) arr.push_back(to_json(v));
  out = {{"point", to_json(pf)}, {"base", to_json(eval(pf, b))}, {"steps", o.steps}, {"iterates", arr}};
  return 0;
}

/// Errors caused by the arguments rather than by a computation.
inline bool invalid_input(const Error& e) {
  return dynamic_cast<const ParseError*>(&e) || dynamic_cast<const BadParams*>(&e) ||
         dynamic_cast<const DegenerateInput*>(&e) || dynamic_cast<const PointNotInterior*>(&e) ||
         dynamic_cast<const ShiftOutOfRange*>(&e) || dynamic_cast<const SingularMap*>(&e);
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affine invariant points of planar convex bodies"};
  app.require_subcommand(1);
  Options o;

  auto add_body = [&](CLI::App* s) {
    s->add_option("--body", o.body,
                  "square | cross | simplex | ngon:M | kab:A,B | beta:ETA | random:K:SEED | file:PATH");
    s->add_option("--map", o.map, "post-map a11,a12,a21,a22,b1,b2 applied to the body");
  };
  auto add_svg = [&](CLI::App* s) { s->add_option("--svg", o.svg, "write a static SVG picture"); };
  auto add_caps = [&](CLI::App* s) {
    s->add_option("--eps", o.eps, "capfamily eps");
    s->add_option("--delta", o.delta, "capfamily delta");
    s->add_option("--eta", o.eta, "capfamily: solve delta for B_eta (with default eps unless --eps)");
  };
  auto add_suite = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--trials", o.trials, "number of random trials");
    s->add_option("--jobs", o.jobs, "worker threads; output does not depend on it");
    s->add_option("--tol", o.tol, "pass threshold");
  };

  auto* point = app.add_subcommand("point", "evaluate an affine invariant point");
  add_body(point), add_svg(point), add_caps(point);
  point->add_option("--id", o.id, "centroid | santalo | john | loewner | symcore | capfamily")->required();

  auto* polar = app.add_subcommand("polar", "polar body (K - z)°, or K^z with --absolute");
  add_body(polar), add_svg(polar);
  polar->add_option("--at", o.at, "pole x,y (default 0,0)");
  polar->add_flag("--absolute", o.absolute, "translate the result back by z");

  auto* shift = app.add_subcommand("shift", "projective shift K_z");
  add_body(shift), add_svg(shift);
  shift->add_option("--z", o.z, "shift vector x,y")->required();

  auto* ellipse = app.add_subcommand("ellipse", "John or Löwner ellipse with certificate");
  add_body(ellipse), add_svg(ellipse);
  ellipse->add_option("kind", o.kind, "john | loewner")->required()->check(CLI::IsMember({"john", "loewner"}));
  ellipse->add_option("--center", o.center, "fixed center x,y");

  auto* region = app.add_subcommand("region", "affine invariant set mapping");
  add_body(region), add_svg(region);
  region->add_option("kind", o.kind, "floating | illumination | santalo | john | symcore")
      ->required()
      ->check(CLI::IsMember({"floating", "illumination", "santalo", "john", "symcore"}));
  region->add_option("--param", o.param, "delta or c")->required();
  region->add_option("--rays", o.rays, "rays or directions (>= 64)");

  auto* dual = app.add_subcommand("dual-check", "residual of q(K^{p(K)}) = p(K)");
  add_body(dual), add_suite(dual), add_caps(dual);
  dual->add_option("--p", o.p, "point p");
  dual->add_option("--q", o.q, "point q");

  auto* prod = app.add_subcommand("product-check", "residual of [p,q](r) = r");
  add_body(prod), add_suite(prod), add_caps(prod);
  prod->add_option("--p", o.p, "point p");
  prod->add_option("--q", o.q, "point q");
  prod->add_option("--r", o.r, "comma separated points r");
  prod->add_flag("--compose", o.compose, "check [q,p]([p,q](r)) = r instead");

  auto* inv = app.add_subcommand("invariance", "max |p(T K) - T p(K)| / diam over random T");
  add_body(inv), add_suite(inv), add_caps(inv);
  inv->add_option("--id", o.id, "point")->required();

  auto* pre = app.add_subcommand("preimage", "z with p((C - z)°) = 0");
  add_body(pre), add_svg(pre), add_caps(pre);
  pre->add_option("--id", o.id, "point")->required();
  pre->add_option("--init", o.init, "start x,y (default centroid)");

  auto* ce = app.add_subcommand("counterexample", "non-injectivity certificate");
  ce->add_option("--eta", o.eta, "eta in (0, 1), default 0.5");
  ce->add_option("--eps", o.eps, "eps, default |alpha(eta)|/10");
  ce->add_option("--delta", o.delta, "evaluate this delta instead of solving for it");

  auto* iter = app.add_subcommand("iterate-product", "iterates [p,p]^k(p)(K)");
  add_body(iter), add_caps(iter);
  iter->add_option("--id", o.id, "point")->required();
  iter->add_option("--steps", o.steps, "number of iterates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto given = [](CLI::App* s) { return s->count("--body") > 0; };
  Json result;
  int code = 0;
  try {
    if (point->parsed())
      code = cmd_point(o, result);
    else if (polar->parsed())
      code = cmd_polar(o, result);
    else if (shift->parsed())
      code = cmd_shift(o, result);
    else if (ellipse->parsed())
      code = cmd_ellipse(o, result);
    else if (region->parsed())
      code = cmd_region(o, result);
    else if (dual->parsed())
      code = cmd_dual_check(o, result, given(dual));
    else if (prod->parsed())
      code = cmd_product_check(o, result, given(prod));
    else if (inv->parsed())
      code = cmd_invariance(o, result);
    else if (pre->parsed())
      code = cmd_preimage(o, result);
    else if (ce->parsed())
      code = cmd_counterexample(o, result);
    else
      code = cmd_iterate_product(o, result);
  } catch (const Usage& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return invalid_input(e) ? 2 : 1;
  }
  out << to_text(result) << '\n';
  return code;
}

}  // namespace aip::cli
