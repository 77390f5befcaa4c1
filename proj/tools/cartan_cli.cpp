// Command line front end: loads spacetime documents or catalog entries,
// dispatches the geometry computations, and emits JSON reports plus CSV
// trajectories. Exit codes: 0 success (and predicate holds), 1 predicate
// does not hold, 2 and above on errors, with a machine-readable error
// object on stderr.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cartan/catalog.hpp"
#include "cartan/classify.hpp"
#include "cartan/connection.hpp"
#include "cartan/kinematics.hpp"
#include "cartan/report.hpp"
#include "cartan/spacetime.hpp"
#include "cartan/transport.hpp"

using namespace cartan;

namespace {

struct SourceOptions {
  std::string catalog_key;
  std::string file_path;
  std::vector<std::string> params;
};

void add_source_flags(CLI::App* cmd, SourceOptions& src) {
  auto* cat =
      cmd->add_option("--catalog", src.catalog_key, "builtin spacetime key");
  auto* file =
      cmd->add_option("--file", src.file_path, "spacetime document path");
  cat->excludes(file);
  file->excludes(cat);
  cmd->add_option("--param", src.params,
                  "parameter override name=value (repeatable)");
}

double parse_number(const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  // constant expressions like pi/2
  static const EvalScope empty_scope;
  return parse_expression(text).value(empty_scope, Vec{});
}

Vec parse_tuple(const std::string& text, std::size_t expect,
                const std::string& what) {
  Vec out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) out.push_back(parse_number(token));
  if (out.size() != expect)
    throw ValidationError(what + " needs " + std::to_string(expect) +
                          " comma-separated components, got " +
                          std::to_string(out.size()));
  return out;
}

Spacetime load_spacetime(const SourceOptions& src) {
  SpacetimeSpec spec;
  if (!src.catalog_key.empty())
    spec = parse_spacetime(find_catalog_entry(src.catalog_key).document);
  else if (!src.file_path.empty())
    spec = load_spacetime_file(src.file_path);
  else
    throw ValidationError("give a spacetime with --catalog <key> or --file <path>");

  std::map<std::string, double> overrides;
  for (const std::string& kv : src.params) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--param expects name=value, got '" + kv + "'");
    overrides[kv.substr(0, eq)] = parse_number(kv.substr(eq + 1));
  }
  return Spacetime(std::move(spec), overrides);
}

Vec point_or_reference(const Spacetime& st, const std::string& point_text) {
  if (!point_text.empty())
    return parse_tuple(point_text, st.dim(), "--point");
  if (st.spec().reference_point) return *st.spec().reference_point;
  throw ValidationError("no --point given and the document has no point line");
}

Json source_parameters(const SourceOptions& src, const Spacetime& st) {
  Json p;
  if (!src.catalog_key.empty()) p["catalog"] = src.catalog_key;
  if (!src.file_path.empty()) p["file"] = src.file_path;
  Json pr = Json::object();
  for (const auto& [k, v] : st.spec().parameters) pr[k] = v;
  p["spacetime_parameters"] = std::move(pr);
  return p;
}

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void emit(Json& env, const WallClock& clock, const std::string& out_path) {
  env["wall_time"] = clock.seconds();
  const std::string text = env.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw ValidationError("cannot write " + out_path);
    f << text;
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

// Maximum componentwise gap between B and its reassembly from the pieces.
double reassembly_residual(const KinematicDecomposition& kd) {
  const std::size_t n = kd.alpha.size();
  const double share = kd.expansion / static_cast<double>(n - 1);
  double worst = 0.0;
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) {
      const double rebuilt = kd.a[mu] * kd.alpha[nu] + kd.omega(mu, nu) +
                             kd.sigma(mu, nu) + share * kd.h(mu, nu);
      worst = std::max(worst, std::fabs(kd.B(mu, nu) - rebuilt));
    }
  return worst;
}

Json decomposition_json(const KinematicDecomposition& kd) {
  Json out;
  out["acceleration"] = to_json(kd.a);
  out["vorticity"] = to_json(kd.omega);
  out["shear"] = to_json(kd.sigma);
  out["expansion"] = kd.expansion;
  return out;
}

// ---------------------------------------------------------------- describe
struct DescribeArgs {
  SourceOptions src;
  std::string point;
  std::string out;
};

int cmd_describe(const DescribeArgs& args) {
  const WallClock clock;
  const Spacetime st = load_spacetime(args.src);
  const Vec x = point_or_reference(st, args.point);
  st.check_domain(x);
  st.validate_at(x);

  Json params = source_parameters(args.src, st);
  params["point"] = to_json(x);
  Json env = make_envelope(st.spec().name, "describe", std::move(params));

  const MetricEval me = st.metric(x, 2);
  const ConnectionEval lc = christoffel(me, 1);
  const T4 R = curvature_from(lc.gamma, lc.dgamma);
  const Mat ric = ricci_from(R);

  Json& res = env["results"];
  res["coordinates"] = st.spec().coordinates;
  res["metric"] = to_json(me.g);
  res["metric_inverse"] = to_json(me.g_inv);
  res["christoffel"] = to_json(lc.gamma);
  res["curvature"] = to_json(R);
  res["ricci"] = to_json(ric);
  res["ricci_scalar"] = ricci_scalar(ric, me.g_inv);

  if (st.has_torsion()) {
    const TorsionEval te = st.torsion(x, 1);
    res["torsion"] = to_json(te.T);
    res["strain"] = to_json(strain(me, te, 0).S);
    res["contorsion"] = to_json(contorsion(me, te, 0).gamma);
    res["rc_connection"] = to_json(rc_connection(me, te, 0).gamma);
  }
  if (st.has_frame()) res["frame"] = to_json(st.frame(x, 0).L);

  emit(env, clock, args.out);
  return 0;
}

// ------------------------------------------------------------ autoparallel
struct AutoparallelArgs {
  SourceOptions src;
  std::string point, velocity, out, format = "json";
  std::string connection = "levi-civita";
  double tau = 1.0;
  double step = 1e-2;
  bool frame = false;
};

int cmd_autoparallel(const AutoparallelArgs& args) {
  const WallClock clock;
  const Spacetime st = load_spacetime(args.src);
  const ConnectionKind kind = parse_connection_kind(args.connection);
  const Vec x0 = point_or_reference(st, args.point);
  const Vec v0 = parse_tuple(args.velocity, st.dim(), "--velocity");
  st.check_domain(x0);
  IntegrateOptions opts;
  opts.step = args.step;

  Json params = source_parameters(args.src, st);
  params["connection"] = to_string(kind);
  params["point"] = to_json(x0);
  params["velocity"] = to_json(v0);
  params["tau"] = args.tau;
  params["step"] = args.step;
  params["frame"] = args.frame;
  Json env = make_envelope(st.spec().name, "autoparallel", std::move(params));
  Json& res = env["results"];
  res["velocity_class"] = to_string(classify_tangent(st, x0, v0));

  Trajectory curve;
  std::vector<Mat> frames;
  double orthonormality = 0.0;
  bool domain_exit = false;
  double exit_tau = args.tau;
  for (;;) {
    try {
      if (args.frame) {
        const IMFResult imf = construct_imf(st, kind, x0, v0, exit_tau, opts);
        curve = imf.curve;
        frames = imf.frames;
        orthonormality = imf.transport_defect;
      } else {
        curve = integrate_autoparallel(st, kind, x0, v0, exit_tau, opts);
      }
      break;
    } catch (const DomainError& e) {
      domain_exit = true;
      Json de;
      de["tau"] = e.tau;
      de["point"] = to_json(e.x);
      de["velocity"] = to_json(e.v);
      de["message"] = e.what();
      res["domain_exit"] = std::move(de);
      if (e.tau == 0.0) throw;  // left the chart immediately, nothing to emit
      exit_tau = e.tau;
    }
  }

  const double q0 = st.interval(x0, v0, v0);
  double drift = 0.0;
  for (const TrajectoryPoint& p : curve.points)
    drift = std::max(drift, std::fabs(st.interval(p.x, p.v, p.v) - q0));

  res["samples"] = curve.points.size();
  const TrajectoryPoint& last = curve.points.back();
  Json end;
  end["tau"] = last.tau;
  end["point"] = to_json(last.x);
  end["velocity"] = to_json(last.v);
  res["endpoint"] = std::move(end);
  (void)domain_exit;

  // Constant-bearing diagnostic for two-dimensional all-plus charts: the
  // angle each velocity makes with the first coordinate direction.
  if (st.dim() == 2 && st.spec().signature == "++") {
    Json bearings = Json::array();
    double mean = 0.0;
    std::vector<double> vals;
    for (const TrajectoryPoint& p : curve.points) {
      const Mat g = st.metric(p.x, 0).g;
      const double along = std::sqrt(g(0, 0)) * p.v[0];
      const double across = std::sqrt(g(1, 1)) * p.v[1];
      const double b = std::atan2(across, along);
      vals.push_back(b);
      bearings.push_back(b);
      mean += b;
    }
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double b : vals) var += (b - mean) * (b - mean);
    res["bearing"] = std::move(bearings);
    res["bearing_mean"] = mean;
    env["residuals"]["bearing_std"] =
        std::sqrt(var / static_cast<double>(vals.size()));
  }

  env["residuals"]["integration_defect"] = curve.defect;
  env["residuals"]["norm_drift"] = drift;
  if (args.frame) env["residuals"]["orthonormality_drift"] = orthonormality;

  const std::string csv =
      trajectory_csv(st.spec().coordinates, curve, frames.empty() ? nullptr : &frames);
  if (args.format == "csv") {
    if (args.out.empty())
      std::cout << csv;
    else
      write_file(args.out, csv);
    return 0;
  }
  if (!args.out.empty()) write_file(args.out, csv);
  emit(env, clock, "");
  return 0;
}

// ------------------------------------------------------------ normal-chart
struct NormalChartArgs {
  SourceOptions src;
  std::string point, out;
  std::string connection = "levi-civita";
  double fd_step = 1e-2;
};

int cmd_normal_chart(const NormalChartArgs& args) {
  const WallClock clock;
  const Spacetime st = load_spacetime(args.src);
  const ConnectionKind kind = parse_connection_kind(args.connection);
  const Vec x0 = point_or_reference(st, args.point);
  st.check_domain(x0);

  Json params = source_parameters(args.src, st);
  params["connection"] = to_string(kind);
  params["point"] = to_json(x0);
  params["fd_step"] = args.fd_step;
  Json env = make_envelope(st.spec().name, "normal-chart", std::move(params));

  const NormalChart chart = NormalChart::build(st, kind, x0);
  const std::size_t n = st.dim();
  const Vec origin(n, 0.0);

  // Transform coefficients: x(xi) = x0 + E xi + (1/2) Q(xi,xi) + ... with
  // Q read off the chart map's second derivative at the center.
  const T3 H0 = chart.from_normal_hessian(origin);
  Json& res = env["results"];
  res["center"] = to_json(chart.center());
  res["frame"] = to_json(chart.frame());
  res["quadratic"] = to_json(H0);
  res["metric_at_center"] = to_json(chart.pullback_metric(origin));
  res["connection_at_center"] = to_json(chart.pullback_connection(origin));

  const NormalChart::Diagnostics diag = chart.diagnostics();
  Json& resid = env["residuals"];
  resid["symmetric_connection"] = diag.symmetric_connection;
  resid["roundtrip"] = diag.roundtrip;
  if (kind == ConnectionKind::levi_civita) {
    resid["metric_deviation"] = diag.metric_deviation;
    resid["metric_gradient"] = diag.metric_gradient;
    resid["connection_derivative_vs_curvature"] =
        lc_gamma_derivative_residual(st, chart, args.fd_step);
  } else {
    resid["torsion_match"] = diag.torsion_match;
  }

  emit(env, clock, args.out);
  return 0;
}

// --------------------------------------------------------------- decompose
struct DecomposeArgs {
  SourceOptions src;
  std::vector<std::string> field;
  std::vector<std::string> points;
  std::string out;
  bool normalize = false;
};

int cmd_decompose(const DecomposeArgs& args) {
  const WallClock clock;
  const Spacetime st = load_spacetime(args.src);
  ReferenceFrameField field = parse_frame_field(st, args.field, !args.normalize);
  if (args.normalize) field = unit_normalize(st.spec(), field);

  std::vector<Vec> points;
  if (args.points.empty())
    points.push_back(point_or_reference(st, ""));
  else
    for (const std::string& p : args.points)
      points.push_back(parse_tuple(p, st.dim(), "--point"));

  Json params = source_parameters(args.src, st);
  params["field"] = args.field;
  params["normalize"] = args.normalize;
  {
    Json pts = Json::array();
    for (const Vec& x : points) pts.push_back(to_json(x));
    params["points"] = std::move(pts);
  }
  Json env = make_envelope(st.spec().name, "decompose", std::move(params));

  double worst_lc = 0.0, worst_rc = 0.0;
  Json rows = Json::array();
  for (const Vec& x : points) {
    st.check_domain(x);
    const Vec Z = eval_frame_field(st, field, x, 0).Z;
    if (classify_tangent(st, x, Z) != TangentClass::timelike)
      throw ValidationError("field is not timelike at a requested point");

    Json row;
    row["point"] = to_json(x);
    const KinematicDecomposition lc = decompose_levi_civita(st, field, x);
    row["levi_civita"] = decomposition_json(lc);
    worst_lc = std::max(worst_lc, reassembly_residual(lc));

    if (st.has_torsion()) {
      const RiemannCartanDecomposition rcd = decompose_riemann_cartan(st, field, x);
      Json rc = decomposition_json(rcd.full);
      rc["torsion_rotation"] = to_json(rcd.corrections.T0);
      rc["strain_deformation"] = to_json(rcd.corrections.S0);
      row["riemann_cartan"] = std::move(rc);
      worst_rc = std::max(worst_rc, reassembly_residual(rcd.full));
    }
    rows.push_back(std::move(row));
  }
  env["results"]["points"] = std::move(rows);
  env["residuals"]["reassembly_levi_civita"] = worst_lc;
  if (st.has_torsion()) env["residuals"]["reassembly_riemann_cartan"] = worst_rc;

  emit(env, clock, args.out);
  return 0;
}

// ---------------------------------------------------------------- classify
struct ClassifyArgs {
  SourceOptions src;
  std::string predicate;
  std::vector<std::string> field;
  std::vector<std::string> points;
  std::string velocity, out;
  std::string connection = "levi-civita";
  double tol = 1e-8;
  double tau = 5.0;
  double step = 1e-2;
  bool normalize = false;
};

int cmd_classify(const ClassifyArgs& args) {
  const WallClock clock;
  const Spacetime st = load_spacetime(args.src);

  std::vector<Vec> samples;
  if (args.points.empty())
    samples.push_back(point_or_reference(st, ""));
  else
    for (const std::string& p : args.points)
      samples.push_back(parse_tuple(p, st.dim(), "--point"));
  for (const Vec& x : samples) st.check_domain(x);

  Json params = source_parameters(args.src, st);
  params["predicate"] = args.predicate;
  if (!args.field.empty()) params["field"] = args.field;
  {
    Json pts = Json::array();
    for (const Vec& x : samples) pts.push_back(to_json(x));
    params["points"] = std::move(pts);
  }
  params["tolerance"] = args.tol;
  Json env = make_envelope(st.spec().name, "classify", std::move(params));
  Json& res = env["results"];

  const auto need_field = [&](bool norm_checked) {
    if (args.field.empty())
      throw ValidationError("--predicate " + args.predicate +
                            " needs --field components");
    ReferenceFrameField f = parse_frame_field(st, args.field,
                                              norm_checked && !args.normalize);
    if (args.normalize) f = unit_normalize(st.spec(), f);
    return f;
  };

  int exit_code = 0;
  if (args.predicate == "irf" || args.predicate == "pirf" ||
      args.predicate == "nacs") {
    FrameVerdict v;
    if (args.predicate == "irf")
      v = irf_check(st, need_field(true), samples, args.tol,
                    parse_connection_kind(args.connection));
    else if (args.predicate == "pirf")
      v = pirf_check(st, need_field(true), samples, args.tol,
                     parse_connection_kind(args.connection));
    else
      v = nacs_check(st, need_field(false), samples, args.tol);
    res["verdict"] = to_json(v);
    exit_code = v.holds ? 0 : 1;
  } else if (args.predicate == "ricci-obstruction") {
    const RicciObstruction ob =
        irf_obstruction_ricci(st, need_field(false), samples, args.tol);
    res["max_component"] = ob.max_component;
    res["obstructed"] = ob.obstructed;
    Json per = Json::array();
    for (const Vec& row : ob.per_sample) per.push_back(to_json(row));
    res["per_sample"] = std::move(per);
    exit_code = ob.obstructed ? 1 : 0;
  } else if (args.predicate == "antisymmetry") {
    const AntisymmetryReport rep = antisymmetry_condition(st, samples, args.tol);
    res["totally_antisymmetric"] = rep.totally_antisymmetric;
    res["antisym_violation"] = rep.antisym_violation;
    res["strain_violation"] = rep.strain_violation;
    res["max_violation"] = rep.max_violation;
    exit_code = rep.totally_antisymmetric ? 0 : 1;
  } else if (args.predicate == "lirf-lorentzian" || args.predicate == "lirf-rc") {
    if (args.velocity.empty())
      throw ValidationError("--predicate " + args.predicate +
                            " needs --point start and --velocity");
    const Vec x0 = samples.front();
    const Vec v0 = parse_tuple(args.velocity, st.dim(), "--velocity");
    IntegrateOptions opts;
    opts.step = args.step;
    FrameVerdict v;
    if (args.predicate == "lirf-lorentzian") {
      const IMFResult imf = construct_imf(st, ConnectionKind::levi_civita, x0,
                                          v0, args.tau, opts);
      const FermiChart chart = FermiChart::build(
          st, ConnectionKind::levi_civita, imf.curve, imf.frames, opts);
      v = lirf_lorentzian_check(st, imf, chart, args.tol);
    } else {
      const ConnectionKind kind = st.has_torsion()
                                      ? ConnectionKind::riemann_cartan
                                      : ConnectionKind::levi_civita;
      const IMFResult imf = construct_imf(st, kind, x0, v0, args.tau, opts);
      v = lirf_rc_check(st, imf, args.tol);
    }
    res["verdict"] = to_json(v);
    exit_code = v.holds ? 0 : 1;
  } else {
    throw ValidationError(
        "unknown predicate '" + args.predicate +
        "' (irf, pirf, nacs, ricci-obstruction, antisymmetry, "
        "lirf-lorentzian, lirf-rc)");
  }

  emit(env, clock, args.out);
  return exit_code;
}

// ---------------------------------------------------------------- self-test
int cmd_self_test(const std::string& out_path) {
  const WallClock clock;
  Json env = make_envelope("catalog", "self-test", Json::object());
  Json rows = Json::array();
  std::size_t failures = 0;
  for (const CatalogEntry& entry : active_catalog()) {
    Json row;
    row["key"] = entry.key;
    try {
      const SpacetimeSpec spec = parse_spacetime(entry.document);
      const Spacetime st{spec};
      if (!spec.reference_point)
        throw ValidationError("catalog entry lacks a reference point");
      const Vec x = *spec.reference_point;
      st.check_domain(x);
      st.validate_at(x);
      const MetricEval me = st.metric(x, 2);
      const ConnectionEval lc = christoffel(me, 1);
      ricci_from(curvature_from(lc.gamma, lc.dgamma));
      if (st.has_torsion()) rc_connection(me, st.torsion(x, 1), 0);
      if (st.has_frame()) teleparallel_connection(st.frame(x, 1), 0);
      row["ok"] = true;
    } catch (const std::exception& e) {
      row["ok"] = false;
      row["message"] = e.what();
      ++failures;
    }
    rows.push_back(std::move(row));
  }
  env["results"]["entries"] = std::move(rows);
  env["results"]["failures"] = failures;
  emit(env, clock, out_path);
  if (failures) {
    Json err;
    err["schema"] = 1;
    err["error"] = {{"type", "self-test-failure"},
                    {"message", std::to_string(failures) + " catalog entries failed"}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
  return 0;
}

int error_exit(const std::string& type, const std::string& message,
               Json extra = Json::object()) {
  Json err;
  err["schema"] = 1;
  Json body;
  body["type"] = type;
  body["message"] = message;
  for (auto& [k, v] : extra.items()) body[k] = v;
  err["error"] = std::move(body);
  std::cerr << err.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical Lorentzian and torsionful geometry toolkit"};
  app.require_subcommand(1);

  DescribeArgs d;
  auto* describe =
      app.add_subcommand("describe", "metric, connection, and curvature at a point");
  add_source_flags(describe, d.src);
  describe->add_option("--point", d.point, "evaluation point c0,c1,...");
  describe->add_option("--out", d.out, "write the JSON report here");

  AutoparallelArgs a;
  auto* autop = app.add_subcommand("autoparallel", "integrate an autoparallel curve");
  add_source_flags(autop, a.src);
  autop->add_option("--point", a.point, "start point c0,c1,...");
  autop->add_option("--velocity", a.velocity, "start velocity c0,c1,...")
      ->required();
  autop->add_option("--connection", a.connection,
                    "levi-civita | riemann-cartan | teleparallel");
  autop->add_option("--tau", a.tau, "parameter length (may be negative)");
  autop->add_option("--step", a.step, "integrator step");
  autop->add_flag("--frame", a.frame, "transport an orthonormal frame too");
  autop->add_option("--out", a.out, "write the trajectory CSV here");
  autop->add_option("--format", a.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  NormalChartArgs nc;
  auto* nchart = app.add_subcommand("normal-chart",
                                    "chart adapted to the connection at a point");
  add_source_flags(nchart, nc.src);
  nchart->add_option("--point", nc.point, "base point c0,c1,...");
  nchart->add_option("--connection", nc.connection,
                     "levi-civita | riemann-cartan | teleparallel");
  nchart->add_option("--fd-step", nc.fd_step,
                     "difference step for the curvature identity");
  nchart->add_option("--out", nc.out, "write the JSON report here");

  DecomposeArgs dc;
  auto* decomp = app.add_subcommand(
      "decompose", "kinematic split of a reference frame field");
  add_source_flags(decomp, dc.src);
  decomp->add_option("--field", dc.field,
                     "field component expression, one per coordinate")
      ->expected(-1);
  decomp->add_option("--point", dc.points, "evaluation point (repeatable)");
  decomp->add_flag("--normalize", dc.normalize,
                   "divide the field by its norm symbolically");
  decomp->add_option("--out", dc.out, "write the JSON report here");

  ClassifyArgs cl;
  auto* classify =
      app.add_subcommand("classify", "inertial-frame predicates and obstructions");
  add_source_flags(classify, cl.src);
  classify->add_option("--predicate", cl.predicate,
                       "irf | pirf | nacs | ricci-obstruction | antisymmetry | "
                       "lirf-lorentzian | lirf-rc")
      ->required();
  classify->add_option("--field", cl.field,
                       "field component expression, one per coordinate")
      ->expected(-1);
  classify->add_option("--point", cl.points,
                       "sample point, or the curve start for lirf predicates");
  classify->add_option("--velocity", cl.velocity, "curve start velocity");
  classify->add_option("--connection", cl.connection,
                       "connection for irf/pirf");
  classify->add_option("--tol", cl.tol, "verdict tolerance");
  classify->add_option("--tau", cl.tau, "curve length for lirf predicates");
  classify->add_option("--step", cl.step, "integrator step");
  classify->add_flag("--normalize", cl.normalize,
                     "divide the field by its norm symbolically");
  classify->add_option("--out", cl.out, "write the JSON report here");

  std::string selftest_out;
  auto* selftest =
      app.add_subcommand("self-test", "validate every catalog entry");
  selftest->add_option("--out", selftest_out, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit("usage-error", e.what());
  }

  try {
    if (*describe) return cmd_describe(d);
    if (*autop) return cmd_autoparallel(a);
    if (*nchart) return cmd_normal_chart(nc);
    if (*decomp) return cmd_decompose(dc);
    if (*classify) return cmd_classify(cl);
    if (*selftest) return cmd_self_test(selftest_out);
  } catch (const ParseError& e) {
    return error_exit("syntax-error", e.what());
  } catch (const DomainError& e) {
    Json extra;
    extra["tau"] = e.tau;
    extra["point"] = to_json(e.x);
    extra["velocity"] = to_json(e.v);
    return error_exit("domain-error", e.what(), extra);
  } catch (const ValidationError& e) {
    return error_exit("validation-error", e.what());
  } catch (const NumericalError& e) {
    return error_exit("numerical-error", e.what());
  } catch (const Error& e) {
    return error_exit("error", e.what());
  } catch (const std::exception& e) {
    return error_exit("internal-error", e.what());
  }
  return 0;
}
