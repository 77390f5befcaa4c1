#include "cartan/spacetime.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace cartan {

std::size_t SpacetimeSpec::coord_index(const std::string& name) const {
  for (std::size_t i = 0; i < coordinates.size(); ++i)
    if (coordinates[i] == name) return i;
  throw ValidationError("unknown coordinate '" + name + "'");
}

namespace {

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct ParserState {
  SpacetimeSpec spec;
  std::size_t line_no = 0;
  bool have_coords = false;
  std::set<std::pair<std::size_t, std::size_t>> metric_seen;
  std::set<std::array<std::size_t, 3>> torsion_seen;
  std::set<std::pair<std::size_t, std::size_t>> frame_seen;
  std::set<std::string> domain_seen;

  [[noreturn]] void fail(const std::string& what, std::size_t col = 0) const {
    throw ParseError("spacetime document line " + std::to_string(line_no) + ": " + what,
                     line_no, col);
  }

  void require_coords() const {
    if (!have_coords) fail("coordinates must be declared first");
  }

  std::size_t coord_or_index(const std::string& tok) const {
    const std::size_t n = spec.dim();
    bool digits = !tok.empty();
    for (char c : tok)
      if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
    if (digits) {
      const std::size_t idx = std::strtoull(tok.c_str(), nullptr, 10);
      if (idx >= n) fail("index " + tok + " out of range for dimension " +
                         std::to_string(n));
      return idx;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (spec.coordinates[i] == tok) return i;
    fail("'" + tok + "' is not a coordinate or index");
  }

  // Constant expression: parameters declared so far plus 'inf'.
  double const_value(const std::string& text) const {
    auto params = spec.parameters;
    params["inf"] = HUGE_VAL;
    const EvalScope scope({}, params);
    try {
      return parse_expression(text).value(scope, {});
    } catch (const Error& e) {
      fail(std::string("in constant expression: ") + e.what());
    }
  }

  Expression component_expr(const std::string& text) const {
    try {
      Expression e = parse_expression(text);
      std::set<std::string> syms;
      e.collect_symbols(syms);
      for (const auto& s : syms) {
        bool known = spec.parameters.count(s) > 0;
        for (const auto& c : spec.coordinates)
          if (c == s) known = true;
        if (!known) fail("unknown identifier '" + s + "' in component expression");
      }
      return e;
    } catch (const ParseError& pe) {
      if (pe.line > 0 && std::string(pe.what()).rfind("spacetime document", 0) == 0)
        throw;
      fail(std::string("in expression: ") + pe.what());
    }
  }
};

// "g[t, r]" -> {"g", "t", "r"}
std::vector<std::string> key_tokens(std::string lhs) {
  for (char& c : lhs)
    if (c == '[' || c == ']' || c == ',') c = ' ';
  return split_ws(lhs);
}

void handle_keyword_line(ParserState& st, const std::vector<std::string>& toks) {
  SpacetimeSpec& spec = st.spec;
  const std::string& kw = toks[0];
  if (kw == "name") {
    if (toks.size() != 2) st.fail("expected: name <identifier>");
    if (!spec.name.empty()) st.fail("duplicate name line");
    spec.name = toks[1];
  } else if (kw == "coordinates") {
    if (st.have_coords) st.fail("duplicate coordinates line");
    if (toks.size() < 3 || toks.size() > 9)
      st.fail("expected 2 to 8 coordinate names");
    std::set<std::string> seen;
    for (std::size_t i = 1; i < toks.size(); ++i) {
      if (!seen.insert(toks[i]).second) st.fail("repeated coordinate '" + toks[i] + "'");
      spec.coordinates.push_back(toks[i]);
    }
    const std::size_t n = spec.dim();
    spec.domain.assign(n, DomainInterval{});
    spec.metric.assign(n * n, Expression());
    st.have_coords = true;
  } else if (kw == "signature") {
    if (toks.size() != 2) st.fail("expected: signature <+->...");
    if (!spec.signature.empty()) st.fail("duplicate signature line");
    for (char c : toks[1])
      if (c != '+' && c != '-') st.fail("signature may contain only + and -");
    spec.signature = toks[1];
  } else if (kw == "point") {
    st.require_coords();
    if (toks.size() != spec.dim() + 1)
      st.fail("point needs one value per coordinate");
    if (spec.reference_point) st.fail("duplicate point line");
    Vec p;
    for (std::size_t i = 1; i < toks.size(); ++i) p.push_back(st.const_value(toks[i]));
    spec.reference_point = p;
  } else {
    st.fail("unknown directive '" + kw + "'");
  }
}

void handle_assignment_line(ParserState& st, const std::string& lhs,
                            const std::string& rhs) {
  SpacetimeSpec& spec = st.spec;
  const std::vector<std::string> toks = key_tokens(lhs);
  if (toks.empty()) st.fail("missing left-hand side before '='");
  const std::string& kw = toks[0];
  const std::size_t n = spec.dim();

  if (kw == "param") {
    if (toks.size() != 2) st.fail("expected: param <name> = <value>");
    if (spec.parameters.count(toks[1])) st.fail("duplicate param '" + toks[1] + "'");
    for (const auto& c : spec.coordinates)
      if (c == toks[1]) st.fail("param '" + toks[1] + "' shadows a coordinate");
    spec.parameters[toks[1]] = st.const_value(rhs);
    return;
  }
  if (kw == "domain") {
    st.require_coords();
    if (toks.size() != 2) st.fail("expected: domain <coord> = (<lo>, <hi>)");
    const std::size_t idx = st.coord_or_index(toks[1]);
    if (!st.domain_seen.insert(toks[1]).second)
      st.fail("duplicate domain for '" + toks[1] + "'");
    std::string body = strip(rhs);
    if (body.size() < 2 || body.front() != '(' || body.back() != ')')
      st.fail("domain interval must look like (<lo>, <hi>)");
    body = body.substr(1, body.size() - 2);
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos) st.fail("domain interval needs a comma");
    DomainInterval d;
    d.lo = st.const_value(body.substr(0, comma));
    d.hi = st.const_value(body.substr(comma + 1));
    if (!(d.lo < d.hi)) st.fail("domain interval is empty");
    spec.domain[idx] = d;
    return;
  }

  st.require_coords();
  if (kw == "g") {
    if (toks.size() != 3) st.fail("expected: g[<i>,<j>] = <expr>");
    const std::size_t i = st.coord_or_index(toks[1]);
    const std::size_t j = st.coord_or_index(toks[2]);
    const auto canon = std::minmax(i, j);
    if (!st.metric_seen.insert({canon.first, canon.second}).second)
      st.fail("duplicate metric component");
    const Expression e = st.component_expr(rhs);
    spec.metric[i * n + j] = e;
    spec.metric[j * n + i] = e;
    return;
  }
  if (kw == "T") {
    if (toks.size() != 4) st.fail("expected: T[<l>,<m>,<n>] = <expr>");
    const std::size_t l = st.coord_or_index(toks[1]);
    const std::size_t m = st.coord_or_index(toks[2]);
    const std::size_t k = st.coord_or_index(toks[3]);
    if (m == k) st.fail("torsion is antisymmetric in its lower indices");
    if (!st.torsion_seen.insert({l, std::min(m, k), std::max(m, k)}).second)
      st.fail("duplicate torsion component");
    if (spec.torsion.empty()) spec.torsion.assign(n * n * n, Expression());
    const Expression e = st.component_expr(rhs);
    spec.torsion[(l * n + m) * n + k] = e;
    spec.torsion[(l * n + k) * n + m] = -e;
    spec.has_torsion = true;
    return;
  }
  if (kw == "e") {
    if (toks.size() != 3) st.fail("expected: e[<a>,<mu>] = <expr>");
    const std::size_t a = st.coord_or_index(toks[1]);
    const std::size_t mu = st.coord_or_index(toks[2]);
    if (!st.frame_seen.insert({a, mu}).second) st.fail("duplicate frame component");
    if (spec.frame.empty()) spec.frame.assign(n * n, Expression());
    spec.frame[mu * n + a] = st.component_expr(rhs);
    spec.has_frame = true;
    return;
  }
  st.fail("unknown assignment target '" + kw + "'");
}

}  // namespace

SpacetimeSpec parse_spacetime(const std::string& text) {
  ParserState st;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++st.line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = strip(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      handle_keyword_line(st, split_ws(line));
    } else {
      handle_assignment_line(st, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
  }

  SpacetimeSpec& spec = st.spec;
  st.line_no = 0;
  if (!st.have_coords) st.fail("document has no coordinates line");
  if (st.metric_seen.empty()) st.fail("document has no metric components");
  if (spec.signature.empty()) {
    spec.signature = "+" + std::string(spec.dim() - 1, '-');
  } else if (spec.signature.size() != spec.dim()) {
    st.fail("signature length does not match the number of coordinates");
  }
  if (spec.reference_point) {
    for (std::size_t i = 0; i < spec.dim(); ++i)
      if (!spec.domain[i].contains((*spec.reference_point)[i]))
        st.fail("reference point lies outside the declared domain");
  }
  return spec;
}

SpacetimeSpec load_spacetime_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spacetime document '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_spacetime(buf.str());
  } catch (const ParseError& pe) {
    throw ParseError(path + ": " + pe.what(), pe.line, pe.col);
  }
}

// ---------------------------------------------------------------- eval

const char* to_string(TangentClass c) {
  switch (c) {
    case TangentClass::timelike: return "timelike";
    case TangentClass::lightlike: return "lightlike";
    case TangentClass::spacelike: return "spacelike";
  }
  return "?";
}

Spacetime::Spacetime(SpacetimeSpec spec,
                     const std::map<std::string, double>& param_overrides)
    : spec_(std::move(spec)), params_(spec_.parameters) {
  for (const auto& [name, value] : param_overrides) {
    auto it = params_.find(name);
    if (it == params_.end())
      throw ValidationError("spacetime '" + spec_.name + "' has no parameter '" +
                            name + "'");
    it->second = value;
  }
  scope_ = EvalScope(spec_.coordinates, params_);
  if (spec_.reference_point) validate_at(*spec_.reference_point);
}

Mat Spacetime::eta() const {
  const std::size_t n = dim();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = spec_.signature[i] == '+' ? 1.0 : -1.0;
  return m;
}

bool Spacetime::in_domain(const Vec& x) const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (!spec_.domain[i].contains(x[i])) return false;
  return true;
}

void Spacetime::check_domain(const Vec& x) const {
  if (x.size() != dim())
    throw ValidationError("point has " + std::to_string(x.size()) +
                          " components, chart has " + std::to_string(dim()));
  for (std::size_t i = 0; i < dim(); ++i)
    if (!spec_.domain[i].contains(x[i]))
      throw ValidationError("coordinate " + spec_.coordinates[i] + " = " +
                            format_double(x[i]) + " is outside the declared domain");
}

MetricEval Spacetime::metric(const Vec& x, int order) const {
  check_domain(x);
  const std::size_t n = dim();
  MetricEval me;
  me.g = Mat(n, n);
  if (order >= 1) me.dg = T3(n);
  if (order >= 2) me.d2g = T4(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const ScalarJet jet = spec_.metric_at(i, j).jet(scope_, x, order);
      me.g(i, j) = jet.value;
      me.g(j, i) = jet.value;
      if (order >= 1)
        for (std::size_t k = 0; k < n; ++k) {
          me.dg(k, i, j) = jet.grad[k];
          me.dg(k, j, i) = jet.grad[k];
        }
      if (order >= 2)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) {
            me.d2g(k, l, i, j) = jet.hess(k, l);
            me.d2g(k, l, j, i) = jet.hess(k, l);
          }
    }
  me.g_inv = inverse(me.g, &me.det);
  return me;
}

TorsionEval Spacetime::torsion(const Vec& x, int order) const {
  check_domain(x);
  const std::size_t n = dim();
  TorsionEval te;
  te.T = T3(n);
  if (order >= 1) te.dT = T4(n);
  if (!has_torsion()) return te;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t k = m + 1; k < n; ++k) {
        const Expression& e = spec_.torsion_at(l, m, k);
        if (e.is_literal_zero()) continue;
        const ScalarJet jet = e.jet(scope_, x, order);
        te.T(l, m, k) = jet.value;
        te.T(l, k, m) = -jet.value;
        if (order >= 1)
          for (std::size_t d = 0; d < n; ++d) {
            te.dT(d, l, m, k) = jet.grad[d];
            te.dT(d, l, k, m) = -jet.grad[d];
          }
      }
  return te;
}

FrameEval Spacetime::frame(const Vec& x, int order) const {
  check_domain(x);
  if (!has_frame())
    throw ValidationError("spacetime '" + spec_.name + "' declares no frame");
  const std::size_t n = dim();
  FrameEval fe;
  fe.L = Mat(n, n);
  if (order >= 1) fe.dL = T3(n);
  if (order >= 2) fe.d2L = T4(n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t a = 0; a < n; ++a) {
      const Expression& e = spec_.frame_at(mu, a);
      if (e.is_literal_zero()) continue;
      const ScalarJet jet = e.jet(scope_, x, order);
      fe.L(mu, a) = jet.value;
      if (order >= 1)
        for (std::size_t k = 0; k < n; ++k) fe.dL(k, mu, a) = jet.grad[k];
      if (order >= 2)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) fe.d2L(k, l, mu, a) = jet.hess(k, l);
    }
  fe.L_inv = inverse(fe.L);
  return fe;
}

double Spacetime::interval(const Vec& x, const Vec& u, const Vec& v) const {
  const MetricEval me = metric(x, 0);
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) s += me.g(i, j) * u[i] * v[j];
  return s;
}

void Spacetime::validate_at(const Vec& x) const {
  check_domain(x);
  const std::size_t n = dim();
  Mat g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      g(i, j) = spec_.metric_at(i, j).value(scope_, x);
      g(j, i) = g(i, j);
    }
  Vec evals;
  Mat evecs;
  jacobi_eigen_sym(g, evals, evecs);
  const double scale = std::max(1.0, max_abs(evals));
  std::size_t plus = 0, minus = 0;
  for (double ev : evals) {
    if (std::fabs(ev) < 1e-12 * scale)
      throw ValidationError("metric is degenerate at the reference point");
    (ev > 0 ? plus : minus) += 1;
  }
  std::size_t want_plus = 0;
  for (char c : spec_.signature)
    if (c == '+') ++want_plus;
  if (plus != want_plus || minus != n - want_plus)
    throw ValidationError("metric eigenvalue signs do not match signature " +
                          spec_.signature);
  if (has_frame()) {
    const FrameEval fe = frame(x, 0);
    const Mat gram = matmul(transpose(fe.L), matmul(g, fe.L));
    const Mat e = eta();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (std::fabs(gram(a, b) - e(a, b)) > 1e-8)
          throw ValidationError("declared frame is not orthonormal for the metric");
  }
}

TangentClass classify_tangent(const Spacetime& st, const Vec& x, const Vec& v,
                              double lightlike_tol) {
  double n2 = 0.0;
  for (double c : v) n2 += c * c;
  if (n2 == 0.0) throw ValidationError("cannot classify a zero tangent vector");
  const double q = st.interval(x, v, v) / n2;
  if (std::fabs(q) <= lightlike_tol) return TangentClass::lightlike;
  return q > 0.0 ? TangentClass::timelike : TangentClass::spacelike;
}

}  // namespace cartan
