#include "cartan/classify.hpp"

#include <cmath>

namespace cartan {
namespace {

FrameVerdict make_verdict(std::string predicate,
                          std::map<std::string, double> residuals, double tol) {
  FrameVerdict v;
  v.predicate = std::move(predicate);
  v.residuals = std::move(residuals);
  v.tolerance = tol;
  v.holds = true;
  for (const auto& [name, value] : v.residuals)
    if (!(value <= tol)) v.holds = false;
  return v;
}

void take_max(std::map<std::string, double>& residuals, const std::string& key,
              double value) {
  double& slot = residuals[key];
  if (value > slot) slot = value;
}

// g(e_a, w) for a frame column and a vector, both in coordinate components.
double frame_inner(const Mat& g, const Mat& frame, std::size_t a, const Vec& w) {
  const std::size_t n = w.size();
  double s = 0.0;
  for (std::size_t mu = 0; mu < n; ++mu)
    for (std::size_t nu = 0; nu < n; ++nu)
      s += g(mu, nu) * frame(mu, a) * w[nu];
  return s;
}

}  // namespace

FrameVerdict irf_check(const Spacetime& st, const ReferenceFrameField& field,
                       const std::vector<Vec>& samples, double tol,
                       ConnectionKind kind) {
  if (samples.empty()) throw ValidationError("irf_check needs at least one sample");
  std::map<std::string, double> res{{"derivative", 0.0},
                                    {"acceleration", 0.0},
                                    {"vorticity", 0.0},
                                    {"shear", 0.0},
                                    {"expansion", 0.0}};
  for (const Vec& x : samples) {
    const KinematicDecomposition kd = decompose(st, kind, field, x);
    take_max(res, "derivative", max_abs(kd.B));
    take_max(res, "acceleration", max_abs(kd.a));
    take_max(res, "vorticity", max_abs(kd.omega));
    take_max(res, "shear", max_abs(kd.sigma));
    take_max(res, "expansion", std::fabs(kd.expansion));
  }
  return make_verdict("irf", std::move(res), tol);
}

RicciObstruction irf_obstruction_ricci(const Spacetime& st,
                                       const ReferenceFrameField& field,
                                       const std::vector<Vec>& samples, double tol) {
  if (samples.empty())
    throw ValidationError("irf_obstruction_ricci needs at least one sample");
  const std::size_t n = st.dim();
  RicciObstruction out;
  for (const Vec& x : samples) {
    const ConnectionEval ce = connection_at(st, ConnectionKind::levi_civita, x, 1);
    const Mat ric = ricci_from(curvature_from(ce.gamma, ce.dgamma));
    const Vec Z = eval_frame_field(st, field, x, 0).Z;
    Vec row(n, 0.0);
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t m = 0; m < n; ++m) row[b] += Z[m] * ric(m, b);
      out.max_component = std::max(out.max_component, std::fabs(row[b]));
    }
    out.per_sample.push_back(std::move(row));
  }
  out.obstructed = out.max_component > tol;
  return out;
}

FrameVerdict pirf_check(const Spacetime& st, const ReferenceFrameField& field,
                        const std::vector<Vec>& samples, double tol,
                        ConnectionKind kind) {
  if (samples.empty()) throw ValidationError("pirf_check needs at least one sample");
  std::map<std::string, double> res{{"free_fall", 0.0}, {"rotation", 0.0}};
  for (const Vec& x : samples) {
    const KinematicDecomposition kd = decompose(st, kind, field, x);
    take_max(res, "free_fall", max_abs(kd.a));
    take_max(res, "rotation", max_abs(alpha_wedge_dalpha(st, field, x)));
  }
  return make_verdict("pirf", std::move(res), tol);
}

FrameVerdict lirf_lorentzian_check(const Spacetime& st, const IMFResult& imf,
                                   const FermiChart& chart, double tol) {
  const std::size_t n = st.dim();
  std::map<std::string, double> res{{"tangent", 0.0},
                                    {"orthonormality", 0.0},
                                    {"metric", 0.0},
                                    {"metric_gradient", 0.0},
                                    {"rotation", 0.0}};
  for (std::size_t k = 0; k < imf.curve.points.size(); ++k)
    for (std::size_t mu = 0; mu < n; ++mu)
      take_max(res, "tangent",
               std::fabs(imf.frames[k](mu, 0) - imf.curve.points[k].v[mu]));
  take_max(res, "orthonormality", imf.transport_defect);

  const Mat eta = st.eta();
  const int probes = 9;
  for (int j = 0; j < probes; ++j) {
    const double t = chart.tau_start() +
                     (chart.tau_end() - chart.tau_start()) * j / (probes - 1.0);
    const double tau = chart.snap(t);
    const Mat gp = chart.metric_on_curve(tau);
    const T3 dgp = chart.metric_derivative_on_curve(tau);
    Mat dev = gp;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) dev(a, b) -= eta(a, b);
    take_max(res, "metric", max_abs(dev));
    take_max(res, "metric_gradient", max_abs(dgp));

    // Hypersurface orthogonality of the chart time axis on the curve:
    // alpha = g'(., 0), wedge it with its curl.
    Vec alpha(n, 0.0);
    Mat F(n, n);
    for (std::size_t mu = 0; mu < n; ++mu) {
      alpha[mu] = gp(mu, 0);
      for (std::size_t nu = 0; nu < n; ++nu)
        F(nu, mu) = dgp(nu, mu, 0) - dgp(mu, nu, 0);
    }
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t nu = 0; nu < n; ++nu)
        for (std::size_t rho = 0; rho < n; ++rho)
          take_max(res, "rotation",
                   std::fabs(alpha[mu] * F(nu, rho) + alpha[nu] * F(rho, mu) +
                             alpha[rho] * F(mu, nu)));
  }
  return make_verdict("lirf_lorentzian", std::move(res), tol);
}

FrameVerdict lirf_lorentzian_check(const NormalChart& chart, double tol) {
  const std::size_t n = chart.center().size();
  const Vec origin(n, 0.0);
  const Mat gp = chart.pullback_metric(origin);

  // Signature read off the chart itself: the pulled-back metric at the
  // center of a metric-kind chart is exactly the eta it was built with.
  Mat dev = gp;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double target = (a == b) ? (gp(a, a) > 0.0 ? 1.0 : -1.0) : 0.0;
      dev(a, b) -= target;
    }

  std::map<std::string, double> res{
      {"metric", max_abs(dev)},
      {"metric_gradient", max_abs(chart.pullback_metric_derivative(origin))},
      {"connection", max_abs(chart.pullback_connection(origin))}};
  return make_verdict("lirf_lorentzian", std::move(res), tol);
}

FrameVerdict lirf_rc_check(const Spacetime& st, const IMFResult& imf, double tol) {
  const std::size_t n = st.dim();
  const std::size_t N = imf.curve.points.size();
  if (N < 5)
    throw ValidationError("lirf_rc_check needs at least five curve samples");
  if (imf.frames.size() != N)
    throw ValidationError("frame count does not match curve samples");
  const double h = imf.curve.points[1].tau - imf.curve.points[0].tau;

  std::map<std::string, double> res{{"e0_tangent", 0.0},
                                    {"orthonormality", 0.0},
                                    {"transport", 0.0},
                                    {"rc_rotation", 0.0},
                                    {"lc_rotation_vs_torsion", 0.0}};
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t mu = 0; mu < n; ++mu)
      take_max(res, "e0_tangent",
               std::fabs(imf.frames[k](mu, 0) - imf.curve.points[k].v[mu]));
  take_max(res, "orthonormality", imf.transport_defect);

  const ConnectionKind kind = st.has_torsion() ? ConnectionKind::riemann_cartan
                                               : ConnectionKind::levi_civita;
  const std::size_t stride = std::max<std::size_t>(1, (N - 4) / 25);
  for (std::size_t k = 2; k + 2 < N; k += stride) {
    const Vec& x = imf.curve.points[k].x;
    const Vec& v = imf.curve.points[k].v;
    const Mat& F = imf.frames[k];
    const MetricEval me = st.metric(x, 0);
    const T3 gamma = connection_at(st, kind, x, 0).gamma;

    // Five point difference of the stored frames gives dF/dtau.
    Mat dF(n, n);
    for (std::size_t mu = 0; mu < n; ++mu)
      for (std::size_t a = 0; a < n; ++a)
        dF(mu, a) = (-imf.frames[k + 2](mu, a) + 8.0 * imf.frames[k + 1](mu, a) -
                     8.0 * imf.frames[k - 1](mu, a) + imf.frames[k - 2](mu, a)) /
                    (12.0 * h);

    T3 K(n);
    Mat Tf(n, n);  // lowered frame torsion T'_{0ij}
    if (st.has_torsion()) {
      const TorsionEval te = st.torsion(x, 0);
      K = contorsion(me, te, 0).gamma;
      FrameEval fe;
      fe.L = F;
      fe.L_inv = inverse(F);
      const T3 Tfr = frame_tensor_udd(te.T, fe);
      const double eta00 = st.eta()(0, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Tf(i, j) = eta00 * Tfr(0, i, j);
    }

    Mat M(n, n), M0(n, n);
    for (std::size_t b = 0; b < n; ++b) {
      Vec Db(n, 0.0), Kb(n, 0.0);
      for (std::size_t mu = 0; mu < n; ++mu) {
        Db[mu] = dF(mu, b);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            Db[mu] += gamma(mu, r, s) * v[r] * F(s, b);
            Kb[mu] += K(mu, r, s) * v[r] * F(s, b);
          }
      }
      for (std::size_t a = 0; a < n; ++a) {
        M(a, b) = frame_inner(me.g, F, a, Db);
        M0(a, b) = M(a, b) - frame_inner(me.g, F, a, Kb);
      }
    }
    take_max(res, "transport", max_abs(M));
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        take_max(res, "rc_rotation", std::fabs(0.5 * (M(i, j) - M(j, i))));
        take_max(res, "lc_rotation_vs_torsion",
                 std::fabs(0.5 * (M0(i, j) - M0(j, i)) - 0.5 * Tf(i, j)));
      }
  }
  return make_verdict("lirf_rc", std::move(res), tol);
}

AntisymmetryReport antisymmetry_condition(const Spacetime& st,
                                          const std::vector<Vec>& samples,
                                          double tol) {
  if (!st.has_torsion())
    throw ValidationError("antisymmetry_condition needs declared torsion");
  if (samples.empty())
    throw ValidationError("antisymmetry_condition needs at least one sample");
  const std::size_t n = st.dim();
  AntisymmetryReport out;
  for (const Vec& x : samples) {
    const MetricEval me = st.metric(x, 0);
    const TorsionEval te = st.torsion(x, 0);
    const T3 Tl = lower_first_index(te.T, me.g);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t p = 0; p < n; ++p) {
          const double anti =
              (Tl(l, m, p) - Tl(l, p, m) + Tl(m, p, l) - Tl(m, l, p) +
               Tl(p, l, m) - Tl(p, m, l)) /
              6.0;
          out.antisym_violation =
              std::max(out.antisym_violation, std::fabs(Tl(l, m, p) - anti));
        }
    out.strain_violation =
        std::max(out.strain_violation, max_abs(strain(me, te, 0).S));
  }
  out.max_violation = std::max(out.antisym_violation, out.strain_violation);
  out.totally_antisymmetric = out.max_violation <= tol;
  return out;
}

FrameVerdict nacs_check(const Spacetime& st, const ReferenceFrameField& field,
                        const std::vector<Vec>& samples, double tol) {
  if (samples.empty()) throw ValidationError("nacs_check needs at least one sample");
  std::map<std::string, double> res{{"spatial_components", 0.0}};
  for (const Vec& x : samples) {
    const Vec Z = eval_frame_field(st, field, x, 0).Z;
    for (std::size_t i = 1; i < st.dim(); ++i)
      take_max(res, "spatial_components", std::fabs(Z[i]));
  }
  return make_verdict("nacs", std::move(res), tol);
}

}  // namespace cartan
