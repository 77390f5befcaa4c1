#include "cartan/kinematics.hpp"

#include <cmath>
#include <set>

namespace cartan {

namespace {

// mixed projector hm(al, mu) = delta^al_mu - Z^al alpha_mu
Mat mixed_projector(const Vec& Z, const Vec& alpha) {
  const std::size_t n = Z.size();
  Mat hm(n, n);
  for (std::size_t al = 0; al < n; ++al)
    for (std::size_t mu = 0; mu < n; ++mu)
      hm(al, mu) = (al == mu ? 1.0 : 0.0) - Z[al] * alpha[mu];
  return hm;
}

KinematicDecomposition split_from_B(const Mat& g, const Mat& g_inv, const Vec& Z,
                                    const Vec& alpha, const Mat& B) {
  const std::size_t n = Z.size();
  KinematicDecomposition kd;
  kd.alpha = alpha;
  kd.B = B;

  kd.a = Vec(n, 0.0);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) kd.a[mu] += B(mu, nu) * Z[nu];

  const Mat hm = mixed_projector(Z, alpha);
  Mat C(n, n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) {
      double s = 0.0;
      for (std::size_t al = 0; al < n; ++al)
        for (std::size_t be = 0; be < n; ++be)
          s += hm(al, mu) * hm(be, nu) * B(al, be);
      C(mu, nu) = s;
    }

  kd.expansion = 0.0;
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu)
      kd.expansion += g_inv(mu, nu) * C(mu, nu);

  kd.h = Mat(n, n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu)
      kd.h(mu, nu) = g(mu, nu) - alpha[mu] * alpha[nu];

  kd.omega = Mat(n, n);
  kd.sigma = Mat(n, n);
  const double trace_share = kd.expansion / double(n - 1);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) {
      kd.omega(mu, nu) = 0.5 * (C(mu, nu) - C(nu, mu));
      kd.sigma(mu, nu) =
          0.5 * (C(mu, nu) + C(nu, mu)) - trace_share * kd.h(mu, nu);
    }
  return kd;
}

int permutation_sign(int a, int b, int c, int d) {
  const int p[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

}  // namespace

KinematicDecomposition decompose(const Spacetime& st, ConnectionKind kind,
                                 const ReferenceFrameField& field, const Vec& x) {
  if (!field.normalized)
    throw ValidationError(
        "kinematic decomposition requires a field declared unit normalized; "
        "apply unit_normalize first");
  const std::size_t n = st.dim();
  const FrameFieldEval ff = eval_frame_field(st, field, x, 1);
  const MetricEval me = st.metric(x, 1);
  const T3 gamma = connection_at(st, kind, x, 0).gamma;

  // A(l, nu) = D_nu Z^l, then lower: B(mu, nu) = g_{mu l} A(l, nu)
  Mat A(n, n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t nu = 0; nu < n; ++nu) {
      double s = ff.dZ(nu, l);
      for (std::size_t r = 0; r < n; ++r) s += gamma(l, nu, r) * ff.Z[r];
      A(l, nu) = s;
    }
  Mat B(n, n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) {
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += me.g(mu, l) * A(l, nu);
      B(mu, nu) = s;
    }

  Vec alpha(n, 0.0);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t s = 0; s < n; ++s) alpha[mu] += me.g(mu, s) * ff.Z[s];

  return split_from_B(me.g, me.g_inv, ff.Z, alpha, B);
}

ReferenceFrameField parse_frame_field(const Spacetime& st,
                                      const std::vector<std::string>& components,
                                      bool normalized) {
  if (components.size() != st.dim())
    throw ValidationError("field needs one component per coordinate");
  ReferenceFrameField f;
  f.normalized = normalized;
  for (const std::string& text : components) {
    Expression e = parse_expression(text);
    std::set<std::string> syms;
    e.collect_symbols(syms);
    for (const std::string& name : syms)
      if (!st.scope().find(name))
        throw ValidationError("unknown symbol '" + name + "' in field component");
    f.Z.push_back(e);
  }
  return f;
}

ReferenceFrameField unit_normalize(const SpacetimeSpec& spec,
                                   const ReferenceFrameField& field) {
  const std::size_t n = spec.dim();
  if (field.Z.size() != n)
    throw ValidationError("field needs one component per coordinate");
  Expression norm2;
  for (std::size_t i = 0; i < n; ++i) {
    if (field.Z[i].is_literal_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (field.Z[j].is_literal_zero() || spec.metric_at(i, j).is_literal_zero())
        continue;
      norm2 = norm2 + spec.metric_at(i, j) * field.Z[i] * field.Z[j];
    }
  }
  const Expression root = Expression::call("sqrt", norm2);
  ReferenceFrameField out;
  out.normalized = true;
  for (std::size_t mu = 0; mu < n; ++mu) out.Z.push_back(field.Z[mu] / root);
  return out;
}

FrameFieldEval eval_frame_field(const Spacetime& st, const ReferenceFrameField& field,
                                const Vec& x, int order, double norm_tol) {
  const std::size_t n = st.dim();
  if (field.Z.size() != n)
    throw ValidationError("field needs one component per coordinate");
  FrameFieldEval out;
  out.Z = Vec(n, 0.0);
  out.dZ = Mat(n, n);
  for (std::size_t mu = 0; mu < n; ++mu) {
    const ScalarJet j = field.Z[mu].jet(st.scope(), x, order);
    out.Z[mu] = j.value;
    if (order >= 1)
      for (std::size_t k = 0; k < n; ++k) out.dZ(k, mu) = j.grad[k];
  }
  if (field.normalized) {
    const double q = st.interval(x, out.Z, out.Z);
    if (std::fabs(q - 1.0) > norm_tol)
      throw ValidationError("field declared normalized has g(Z,Z) = " +
                            format_double(q) + " at the point");
  }
  return out;
}

KinematicDecomposition decompose_levi_civita(const Spacetime& st,
                                             const ReferenceFrameField& field,
                                             const Vec& x) {
  return decompose(st, ConnectionKind::levi_civita, field, x);
}

KinematicDecomposition decompose_orthonormal(const Spacetime& st, const Vec& x) {
  if (!st.has_frame())
    throw ValidationError("frame decomposition requires a declared frame");
  const std::size_t n = st.dim();
  const MetricEval me = st.metric(x, 1);
  const FrameEval fe = st.frame(x, 1);
  const Mat eta = st.eta();

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t mu = 0; mu < n; ++mu)
        for (std::size_t nu = 0; nu < n; ++nu)
          s += fe.L(mu, a) * me.g(mu, nu) * fe.L(nu, b);
      if (std::fabs(s - eta(a, b)) > 1e-8)
        throw ValidationError("declared frame is not orthonormal at the point");
    }

  const ConnectionEval lc = christoffel(me, 0);
  const T3 gf = frame_connection(lc, fe);

  // B'(a,b) = g(e_a, D_{e_b} e_0) = eta_{ac} gf(c, b, 0)
  Mat B(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) B(a, b) = eta(a, a) * gf(a, b, 0);

  Vec Z(n, 0.0), alpha(n, 0.0);
  Z[0] = 1.0;
  alpha[0] = eta(0, 0);
  Mat eta_inv(n, n);
  for (std::size_t a = 0; a < n; ++a) eta_inv(a, a) = 1.0 / eta(a, a);
  return split_from_B(eta, eta_inv, Z, alpha, B);
}

Mat adapted_orthonormal_frame(const Spacetime& st, const ReferenceFrameField& field,
                              const Vec& x) {
  const FrameFieldEval ff = eval_frame_field(st, field, x, 0);
  return orthonormal_completion(st.metric(x, 0).g, st.eta(), ff.Z);
}

RiemannCartanDecomposition decompose_riemann_cartan(const Spacetime& st,
                                                    const ReferenceFrameField& field,
                                                    const Vec& x) {
  if (!st.has_torsion())
    throw ValidationError("torsion decomposition requires declared torsion");
  const std::size_t n = st.dim();
  RiemannCartanDecomposition out;
  out.full = decompose(st, ConnectionKind::riemann_cartan, field, x);
  out.metric = decompose(st, ConnectionKind::levi_civita, field, x);
  out.adapted_frame = adapted_orthonormal_frame(st, field, x);

  const MetricEval me = st.metric(x, 0);
  const TorsionEval te = st.torsion(x, 0);
  const StrainEval se = strain(me, te, 0);
  FrameEval fe;
  fe.L = out.adapted_frame;
  fe.L_inv = inverse(fe.L);
  const T3 Tf = frame_tensor_udd(te.T, fe);
  const T3 Sf = frame_tensor_udd(se.S, fe);
  out.corrections.T0 = Mat(n, n);
  out.corrections.S0 = Mat(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      out.corrections.T0(a, b) = 0.5 * Tf(0, a, b);
      out.corrections.S0(a, b) = -0.5 * Sf(0, a, b);
    }
  return out;
}

Vec vorticity_covector(const Spacetime& st, const ReferenceFrameField& field,
                       const Vec& x) {
  const std::size_t n = st.dim();
  if (n != 4 || st.spec().signature != "+---")
    throw ValidationError("vorticity covector requires dimension 4, signature +---");
  const KinematicDecomposition kd = decompose_levi_civita(st, field, x);
  const Mat E = adapted_orthonormal_frame(st, field, x);
  Mat w(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t mu = 0; mu < n; ++mu)
        for (std::size_t nu = 0; nu < n; ++nu)
          s += kd.omega(mu, nu) * E(mu, a) * E(nu, b);
      w(a, b) = s;
    }
  Vec v(4, 0.0);
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j)
      for (int k = 1; k < 4; ++k)
        v[i] += permutation_sign(0, i, j, k) * w(j, k);
  return v;
}

T3 alpha_wedge_dalpha(const Spacetime& st, const ReferenceFrameField& field,
                      const Vec& x) {
  const std::size_t n = st.dim();
  const FrameFieldEval ff = eval_frame_field(st, field, x, 1);
  const MetricEval me = st.metric(x, 1);

  Vec alpha(n, 0.0);
  Mat P(n, n);  // P(nu, mu) = d_nu alpha_mu
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t s = 0; s < n; ++s) {
      alpha[mu] += me.g(mu, s) * ff.Z[s];
      for (std::size_t nu = 0; nu < n; ++nu)
        P(nu, mu) += me.dg(nu, mu, s) * ff.Z[s] + me.g(mu, s) * ff.dZ(nu, s);
    }
  Mat F(n, n);  // (d alpha)_{mu nu}
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu) F(mu, nu) = P(mu, nu) - P(nu, mu);

  T3 W(n);
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu)
      for (std::size_t rho = 0; rho < n; ++rho)
        W(mu, nu, rho) = alpha[mu] * F(nu, rho) + alpha[nu] * F(rho, mu) +
                         alpha[rho] * F(mu, nu);
  return W;
}

}  // namespace cartan
