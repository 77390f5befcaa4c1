#include "cartan/connection.hpp"

namespace cartan {

const char* to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::levi_civita: return "levi-civita";
    case ConnectionKind::riemann_cartan: return "riemann-cartan";
    case ConnectionKind::teleparallel: return "teleparallel";
  }
  return "?";
}

ConnectionKind parse_connection_kind(const std::string& name) {
  if (name == "levi-civita") return ConnectionKind::levi_civita;
  if (name == "riemann-cartan") return ConnectionKind::riemann_cartan;
  if (name == "teleparallel") return ConnectionKind::teleparallel;
  throw ValidationError("unknown connection kind '" + name +
                        "' (expected levi-civita, riemann-cartan, or teleparallel)");
}

ConnectionEval connection_at(const Spacetime& st, ConnectionKind kind, const Vec& x,
                             int order) {
  switch (kind) {
    case ConnectionKind::levi_civita:
      return christoffel(st.metric(x, order + 1), order);
    case ConnectionKind::riemann_cartan:
      return rc_connection(st.metric(x, order + 1), st.torsion(x, order), order);
    case ConnectionKind::teleparallel:
      return teleparallel_connection(st.frame(x, order + 1), order);
  }
  throw ValidationError("unknown connection kind");
}

Mat orthonormal_completion(const Mat& g, const Mat& eta, const Vec& seed) {
  const std::size_t n = g.rows();
  auto dot = [&](const Vec& u, const Vec& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += g(i, j) * u[i] * v[j];
    return s;
  };
  std::vector<Vec> basis;
  const double seed_norm2 = dot(seed, seed);
  if (seed_norm2 * eta(0, 0) <= 0.0)
    throw ValidationError("seed vector norm sign does not match the signature");
  Vec e0 = seed;
  for (double& c : e0) c /= std::sqrt(std::fabs(seed_norm2));
  basis.push_back(e0);
  for (std::size_t slot = 1; slot < n; ++slot) {
    const double want = eta(slot, slot);
    Vec best;
    double best_norm2 = 0.0;
    for (std::size_t cand = 0; cand < n; ++cand) {
      Vec w(n, 0.0);
      w[cand] = 1.0;
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const double proj = dot(basis[b], w) * eta(b, b);
        for (std::size_t i = 0; i < n; ++i) w[i] -= proj * basis[b][i];
      }
      const double w2 = dot(w, w);
      if (w2 * want > std::fabs(best_norm2)) {
        best = w;
        best_norm2 = w2;
      }
    }
    if (best.empty())
      throw NumericalError("orthonormal completion failed: no candidate with the "
                           "required norm sign");
    for (double& c : best) c /= std::sqrt(std::fabs(best_norm2));
    basis.push_back(best);
  }
  Mat E(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < n; ++i) E(i, a) = basis[a][i];
  return E;
}

T3 metric_inverse_derivative(const MetricEval& me) {
  const std::size_t n = me.g.rows();
  T3 dginv(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            s += me.g_inv(i, a) * me.dg(k, a, b) * me.g_inv(b, j);
        dginv(k, i, j) = -s;
      }
  return dginv;
}

ConnectionEval christoffel(const MetricEval& me, int order) {
  const std::size_t n = me.g.rows();
  ConnectionEval ce;
  ce.gamma = T3(n);
  for (std::size_t nu = 0; nu < n; ++nu)
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t al = mu; al < n; ++al) {
        double s = 0.0;
        for (std::size_t ka = 0; ka < n; ++ka)
          s += me.g_inv(nu, ka) *
               (me.dg(mu, ka, al) + me.dg(al, ka, mu) - me.dg(ka, mu, al));
        ce.gamma(nu, mu, al) = 0.5 * s;
        ce.gamma(nu, al, mu) = 0.5 * s;
      }
  if (order >= 1) {
    const T3 dginv = metric_inverse_derivative(me);
    ce.dgamma = T4(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t nu = 0; nu < n; ++nu)
        for (std::size_t mu = 0; mu < n; ++mu)
          for (std::size_t al = mu; al < n; ++al) {
            double s = 0.0;
            for (std::size_t ka = 0; ka < n; ++ka) {
              s += dginv(k, nu, ka) *
                   (me.dg(mu, ka, al) + me.dg(al, ka, mu) - me.dg(ka, mu, al));
              s += me.g_inv(nu, ka) * (me.d2g(k, mu, ka, al) + me.d2g(k, al, ka, mu) -
                                       me.d2g(k, ka, mu, al));
            }
            ce.dgamma(k, nu, mu, al) = 0.5 * s;
            ce.dgamma(k, nu, al, mu) = 0.5 * s;
          }
  }
  return ce;
}

StrainEval strain(const MetricEval& me, const TorsionEval& te, int order) {
  const std::size_t n = me.g.rows();
  StrainEval se;
  se.S = T3(n);
  // lower(m,n,s) = g_{ma} T^a_{ns}, so S^l_{mn} = -g^{ls}(lower(m,n,s) + lower(n,m,s))
  T3 low(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        for (std::size_t a = 0; a < n; ++a) acc += me.g(m, a) * te.T(a, p, s);
        low(m, p, s) = acc;
      }
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t p = m; p < n; ++p) {
        double acc = 0.0;
        for (std::size_t s = 0; s < n; ++s)
          acc += me.g_inv(l, s) * (low(m, p, s) + low(p, m, s));
        se.S(l, m, p) = -acc;
        se.S(l, p, m) = -acc;
      }
  if (order >= 1) {
    const T3 dginv = metric_inverse_derivative(me);
    se.dS = T4(n);
    for (std::size_t k = 0; k < n; ++k) {
      T3 dlow(n);
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t p = 0; p < n; ++p)
          for (std::size_t s = 0; s < n; ++s) {
            double acc = 0.0;
            for (std::size_t a = 0; a < n; ++a)
              acc += me.dg(k, m, a) * te.T(a, p, s) + me.g(m, a) * te.dT(k, a, p, s);
            dlow(m, p, s) = acc;
          }
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t p = m; p < n; ++p) {
            double acc = 0.0;
            for (std::size_t s = 0; s < n; ++s)
              acc += dginv(k, l, s) * (low(m, p, s) + low(p, m, s)) +
                     me.g_inv(l, s) * (dlow(m, p, s) + dlow(p, m, s));
            se.dS(k, l, m, p) = -acc;
            se.dS(k, l, p, m) = -acc;
          }
    }
  }
  return se;
}

ConnectionEval contorsion(const MetricEval& me, const TorsionEval& te, int order) {
  const std::size_t n = me.g.rows();
  const StrainEval se = strain(me, te, order);
  ConnectionEval ce;
  ce.gamma = T3(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t p = 0; p < n; ++p)
        ce.gamma(l, m, p) = 0.5 * (te.T(l, m, p) + se.S(l, m, p));
  if (order >= 1) {
    ce.dgamma = T4(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t p = 0; p < n; ++p)
            ce.dgamma(k, l, m, p) = 0.5 * (te.dT(k, l, m, p) + se.dS(k, l, m, p));
  }
  return ce;
}

ConnectionEval rc_connection(const MetricEval& me, const TorsionEval& te, int order) {
  const std::size_t n = me.g.rows();
  ConnectionEval lc = christoffel(me, order);
  const ConnectionEval kt = contorsion(me, te, order);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t p = 0; p < n; ++p) lc.gamma(l, m, p) += kt.gamma(l, m, p);
  if (order >= 1)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t p = 0; p < n; ++p)
            lc.dgamma(k, l, m, p) += kt.dgamma(k, l, m, p);
  return lc;
}

ConnectionEval teleparallel_connection(const FrameEval& fe, int order) {
  const std::size_t n = fe.L.rows();
  ConnectionEval ce;
  ce.gamma = T3(n);
  for (std::size_t nu = 0; nu < n; ++nu)
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t l = 0; l < n; ++l) {
        double s = 0.0;
        for (std::size_t b = 0; b < n; ++b) s += fe.dL(mu, nu, b) * fe.L_inv(b, l);
        ce.gamma(nu, mu, l) = -s;
      }
  if (order >= 1) {
    // d_k (L^-1) = -(L^-1)(d_k L)(L^-1)
    T3 dLinv(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t l = 0; l < n; ++l) {
          double s = 0.0;
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
              s += fe.L_inv(b, r) * fe.dL(k, r, c) * fe.L_inv(c, l);
          dLinv(k, b, l) = -s;
        }
    ce.dgamma = T4(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t nu = 0; nu < n; ++nu)
        for (std::size_t mu = 0; mu < n; ++mu)
          for (std::size_t l = 0; l < n; ++l) {
            double s = 0.0;
            for (std::size_t b = 0; b < n; ++b)
              s += fe.d2L(k, mu, nu, b) * fe.L_inv(b, l) +
                   fe.dL(mu, nu, b) * dLinv(k, b, l);
            ce.dgamma(k, nu, mu, l) = -s;
          }
  }
  return ce;
}

T4 curvature_from(const T3& gamma, const T4& dgamma_dir, const T3* c) {
  const std::size_t n = gamma.dim();
  T4 R(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
          double s = dgamma_dir(a, l, b, m) - dgamma_dir(b, l, a, m);
          for (std::size_t k = 0; k < n; ++k) {
            s += gamma(l, a, k) * gamma(k, b, m) - gamma(l, b, k) * gamma(k, a, m);
            if (c) s -= (*c)(k, a, b) * gamma(l, k, m);
          }
          R(l, m, a, b) = s;
          R(l, m, b, a) = -s;
        }
  return R;
}

T3 torsion_of_connection(const T3& gamma, const T3* c) {
  const std::size_t n = gamma.dim();
  T3 T(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t p = m + 1; p < n; ++p) {
        double s = gamma(l, m, p) - gamma(l, p, m);
        if (c) s -= (*c)(l, m, p);
        T(l, m, p) = s;
        T(l, p, m) = -s;
      }
  return T;
}

Mat ricci_from(const T4& R) {
  const std::size_t n = R.dim();
  Mat ric(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += R(l, m, l, b);
      ric(m, b) = s;
    }
  return ric;
}

double ricci_scalar(const Mat& ricci, const Mat& g_inv) {
  double s = 0.0;
  for (std::size_t m = 0; m < ricci.rows(); ++m)
    for (std::size_t b = 0; b < ricci.rows(); ++b) s += g_inv(m, b) * ricci(m, b);
  return s;
}

T3 lower_first_index(const T3& t, const Mat& g) {
  const std::size_t n = t.dim();
  T3 out(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t p = 0; p < n; ++p) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += g(l, k) * t(k, m, p);
        out(l, m, p) = s;
      }
  return out;
}

T3 structure_coefficients(const FrameEval& fe) {
  const std::size_t n = fe.L.rows();
  T3 c(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = b + 1; d < n; ++d) {
        double s = 0.0;
        for (std::size_t mu = 0; mu < n; ++mu)
          for (std::size_t nu = 0; nu < n; ++nu)
            s += fe.L_inv(a, mu) *
                 (fe.L(nu, b) * fe.dL(nu, mu, d) - fe.L(nu, d) * fe.dL(nu, mu, b));
        c(a, b, d) = s;
        c(a, d, b) = -s;
      }
  return c;
}

T3 frame_connection(const ConnectionEval& conn, const FrameEval& fe) {
  const std::size_t n = fe.L.rows();
  T3 out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t cc = 0; cc < n; ++cc) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          double inner = 0.0;
          for (std::size_t mu = 0; mu < n; ++mu) {
            inner += fe.L(mu, b) * fe.dL(mu, l, cc);
            for (std::size_t nu = 0; nu < n; ++nu)
              inner += fe.L(mu, b) * fe.L(nu, cc) * conn.gamma(l, mu, nu);
          }
          s += fe.L_inv(a, l) * inner;
        }
        out(a, b, cc) = s;
      }
  return out;
}

T4 frame_curvature(const T4& R, const FrameEval& fe) {
  const std::size_t n = R.dim();
  T4 out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          double s = 0.0;
          for (std::size_t l = 0; l < n; ++l)
            for (std::size_t m = 0; m < n; ++m)
              for (std::size_t al = 0; al < n; ++al)
                for (std::size_t be = 0; be < n; ++be)
                  s += fe.L_inv(a, l) * fe.L(m, b) * fe.L(al, c) * fe.L(be, d) *
                       R(l, m, al, be);
          out(a, b, c, d) = s;
          out(a, b, d, c) = -s;
        }
  return out;
}

T3 frame_tensor_udd(const T3& t, const FrameEval& fe) {
  const std::size_t n = t.dim();
  T3 out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t m = 0; m < n; ++m)
            for (std::size_t p = 0; p < n; ++p)
              s += fe.L_inv(a, l) * fe.L(m, b) * fe.L(p, c) * t(l, m, p);
        out(a, b, c) = s;
      }
  return out;
}

CurvatureSplit curvature_split(const MetricEval& me, const TorsionEval& te) {
  const std::size_t n = me.g.rows();
  CurvatureSplit cs;
  const ConnectionEval lc = christoffel(me, 1);
  const ConnectionEval full = rc_connection(me, te, 1);
  const ConnectionEval kt = contorsion(me, te, 1);
  cs.R_lc = curvature_from(lc.gamma, lc.dgamma);
  cs.R_total = curvature_from(full.gamma, full.dgamma);
  // DK(a,l,b,m) = Dlc_a K^l_{bm}
  T4 DK(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t m = 0; m < n; ++m) {
          double s = kt.dgamma(a, l, b, m);
          for (std::size_t sg = 0; sg < n; ++sg)
            s += lc.gamma(l, a, sg) * kt.gamma(sg, b, m) -
                 lc.gamma(sg, a, b) * kt.gamma(l, sg, m) -
                 lc.gamma(sg, a, m) * kt.gamma(l, b, sg);
          DK(a, l, b, m) = s;
        }
  cs.J = T4(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          double s = DK(a, l, b, m);
          for (std::size_t sg = 0; sg < n; ++sg)
            s -= kt.gamma(sg, a, m) * kt.gamma(l, b, sg);
          cs.J(l, m, a, b) = s;
        }
  return cs;
}

}  // namespace cartan
