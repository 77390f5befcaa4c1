#include "cartan/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cartan {

namespace {

bool all_finite(const Vec& v) {
  for (double c : v)
    if (!std::isfinite(c)) return false;
  return true;
}

// Right-hand side of the autoparallel system: (x, v) -> (v, -Gamma(x)(v, v)).
struct AutoparallelRhs {
  const Spacetime& st;
  ConnectionKind kind;

  void operator()(const Vec& x, const Vec& v, Vec& dx, Vec& dv) const {
    const std::size_t n = x.size();
    const T3 gamma = connection_at(st, kind, x, 0).gamma;
    dx = v;
    dv.assign(n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
      double s = 0.0;
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t p = 0; p < n; ++p) s += gamma(l, m, p) * v[m] * v[p];
      dv[l] = -s;
    }
  }
};

void axpy(Vec& y, double a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

template <typename Rhs>
void rk4_step(const Rhs& rhs, double h, Vec& x, Vec& v) {
  const std::size_t n = x.size();
  Vec k1x(n), k1v(n), k2x(n), k2v(n), k3x(n), k3v(n), k4x(n), k4v(n);
  Vec tx = x, tv = v;
  rhs(tx, tv, k1x, k1v);
  tx = x; tv = v;
  axpy(tx, h / 2, k1x); axpy(tv, h / 2, k1v);
  rhs(tx, tv, k2x, k2v);
  tx = x; tv = v;
  axpy(tx, h / 2, k2x); axpy(tv, h / 2, k2v);
  rhs(tx, tv, k3x, k3v);
  tx = x; tv = v;
  axpy(tx, h, k3x); axpy(tv, h, k3v);
  rhs(tx, tv, k4x, k4v);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += h / 6 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]);
    v[i] += h / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
  }
}

double state_diff(const Vec& ax, const Vec& av, const Vec& bx, const Vec& bv) {
  double m = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    m = std::max(m, std::fabs(ax[i] - bx[i]));
    m = std::max(m, std::fabs(av[i] - bv[i]));
  }
  return m;
}

}  // namespace

Trajectory integrate_autoparallel(const Spacetime& st, ConnectionKind kind,
                                  const Vec& x0, const Vec& v0, double tau_end,
                                  const IntegrateOptions& opts) {
  const std::size_t n = st.dim();
  if (x0.size() != n || v0.size() != n)
    throw ValidationError("initial state does not match the chart dimension");
  if (!(opts.step > 0.0)) throw ValidationError("integration step must be positive");
  st.check_domain(x0);
  if (!all_finite(x0) || !all_finite(v0))
    throw ValidationError("initial state is not finite");

  Trajectory tr;
  tr.points.push_back({0.0, x0, v0});
  if (tau_end == 0.0) return tr;

  const AutoparallelRhs rhs{st, kind};
  const std::size_t steps = static_cast<std::size_t>(
      std::max(1.0, std::ceil(std::fabs(tau_end) / opts.step - 1e-12)));
  const double h = tau_end / static_cast<double>(steps);

  Vec x = x0, v = v0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double tau_prev = h * static_cast<double>(i);
    const Vec px = x, pv = v;
    try {
      if (opts.scheme == StepScheme::rk4_halving) {
        Vec fx = x, fv = v;
        rk4_step(rhs, h, fx, fv);
        rk4_step(rhs, h / 2, x, v);
        rk4_step(rhs, h / 2, x, v);
        tr.defect = std::max(tr.defect, state_diff(fx, fv, x, v));
      } else {
        rk4_step(rhs, h, x, v);
      }
    } catch (const DomainError&) {
      throw;
    } catch (const Error& e) {
      throw DomainError("autoparallel left the valid region near tau = " +
                            format_double(tau_prev) + ": " + e.what(),
                        tau_prev, px, pv);
    }
    const double tau = h * static_cast<double>(i + 1);
    if (!all_finite(x) || !all_finite(v))
      throw NumericalError("autoparallel state became non-finite at tau = " +
                           format_double(tau));
    if (!st.in_domain(x))
      throw DomainError("autoparallel left the chart domain at tau = " +
                            format_double(tau),
                        tau_prev, px, pv);
    tr.points.push_back({tau, x, v});
  }
  return tr;
}

Vec exponential_map(const Spacetime& st, ConnectionKind kind, const Vec& x0,
                    const Vec& v0, const IntegrateOptions& opts) {
  if (max_abs(v0) == 0.0) return x0;
  return integrate_autoparallel(st, kind, x0, v0, 1.0, opts).points.back().x;
}

TrajectoryPoint Trajectory::at(double tau) const {
  if (points.empty()) throw ValidationError("empty trajectory");
  if (points.size() == 1) {
    if (tau != points.front().tau)
      throw ValidationError("tau outside the stored trajectory");
    return points.front();
  }
  const bool ascending = points.front().tau <= points.back().tau;
  const double lo = ascending ? points.front().tau : points.back().tau;
  const double hi = ascending ? points.back().tau : points.front().tau;
  const double slack = 1e-9 * (1.0 + hi - lo);
  if (tau < lo - slack || tau > hi + slack)
    throw ValidationError("tau = " + format_double(tau) +
                          " outside the stored trajectory");
  // locate the segment
  std::size_t idx = 0;
  {
    std::size_t a = 0, b = points.size() - 1;
    while (b - a > 1) {
      const std::size_t mid = (a + b) / 2;
      const bool left = ascending ? tau < points[mid].tau : tau > points[mid].tau;
      (left ? b : a) = mid;
    }
    idx = a;
  }
  const TrajectoryPoint& p0 = points[idx];
  const TrajectoryPoint& p1 = points[idx + 1];
  const double d = p1.tau - p0.tau;
  const double s = (tau - p0.tau) / d;
  const double h00 = (2 * s - 3) * s * s + 1;
  const double h10 = ((s - 2) * s + 1) * s;
  const double h01 = (3 - 2 * s) * s * s;
  const double h11 = (s - 1) * s * s;
  const double g00 = 6 * s * (s - 1) / d;
  const double g10 = (3 * s - 4) * s + 1;
  const double g01 = -g00;
  const double g11 = (3 * s - 2) * s;
  TrajectoryPoint out;
  out.tau = tau;
  const std::size_t n = p0.x.size();
  out.x.resize(n);
  out.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.x[i] = h00 * p0.x[i] + h10 * d * p0.v[i] + h01 * p1.x[i] + h11 * d * p1.v[i];
    out.v[i] = g00 * p0.x[i] + g10 * p0.v[i] + g01 * p1.x[i] + g11 * p1.v[i];
  }
  return out;
}

std::vector<Mat> parallel_transport_frame(const Spacetime& st, ConnectionKind kind,
                                          const Trajectory& curve, const Mat& F0,
                                          const IntegrateOptions& opts) {
  const std::size_t n = st.dim();
  if (F0.rows() != n || F0.cols() == 0 || F0.cols() > n)
    throw ValidationError("transported frame must be n x k with 1 <= k <= n");
  const std::size_t cols = F0.cols();
  std::vector<Mat> out;
  out.reserve(curve.points.size());
  out.push_back(F0);
  if (curve.points.size() == 1) return out;

  // dF(l,a) = -Gamma^l_{mp} xdot^m F(p,a), with the curve state interpolated
  auto rhs = [&](double tau, const Mat& F, Mat& dF) {
    const TrajectoryPoint p = curve.at(tau);
    const T3 gamma = connection_at(st, kind, p.x, 0).gamma;
    dF = Mat(n, cols);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t a = 0; a < cols; ++a) {
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t q = 0; q < n; ++q)
            s += gamma(l, m, q) * p.v[m] * F(q, a);
        dF(l, a) = -s;
      }
  };
  auto add_scaled = [&](Mat& y, double a, const Mat& x) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < cols; ++j) y(i, j) += a * x(i, j);
  };

  Mat F = F0;
  for (std::size_t seg = 0; seg + 1 < curve.points.size(); ++seg) {
    const double t0 = curve.points[seg].tau;
    const double t1 = curve.points[seg + 1].tau;
    const std::size_t sub = static_cast<std::size_t>(
        std::max(1.0, std::ceil(std::fabs(t1 - t0) / opts.step - 1e-12)));
    const double h = (t1 - t0) / static_cast<double>(sub);
    for (std::size_t i = 0; i < sub; ++i) {
      const double tau = t0 + h * static_cast<double>(i);
      Mat k1(n, cols), k2(n, cols), k3(n, cols), k4(n, cols), tmp(n, cols);
      rhs(tau, F, k1);
      tmp = F; add_scaled(tmp, h / 2, k1);
      rhs(tau + h / 2, tmp, k2);
      tmp = F; add_scaled(tmp, h / 2, k2);
      rhs(tau + h / 2, tmp, k3);
      tmp = F; add_scaled(tmp, h, k3);
      rhs(tau + h, tmp, k4);
      add_scaled(F, h / 6, k1);
      add_scaled(F, h / 3, k2);
      add_scaled(F, h / 3, k3);
      add_scaled(F, h / 6, k4);
    }
    out.push_back(F);
  }
  return out;
}

// ---------------------------------------------------------------- charts

NormalChart NormalChart::build(const Spacetime& st, ConnectionKind kind,
                               const Vec& x0) {
  st.check_domain(x0);
  const std::size_t n = st.dim();
  NormalChart nc;
  nc.st_ = &st;
  nc.kind_ = kind;
  nc.x0_ = x0;
  const MetricEval me = st.metric(x0, 1);
  const ConnectionEval ce = connection_at(st, kind, x0, 1);
  const T3& gamma = ce.gamma;

  if (kind == ConnectionKind::levi_civita) {
    const Mat eta = st.eta();
    Vec evals;
    Mat evecs;
    jacobi_eigen_sym(me.g, evals, evecs);
    // seed the slot-0 leg with an eigenvector whose norm sign matches eta(0,0)
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if (evals[i] * eta(0, 0) > 0.0) {
        pick = i;
        break;
      }
    if (pick == n)
      throw ValidationError("no metric eigenvalue matches the leading signature sign");
    Vec seed(n);
    for (std::size_t i = 0; i < n; ++i) seed[i] = evecs(i, pick);
    nc.E_ = orthonormal_completion(me.g, eta, seed);
  } else {
    nc.E_ = Mat::identity(n);
  }
  nc.E_inv_ = inverse(nc.E_);

  T3 gs(n);
  T4 dgs(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t p = 0; p < n; ++p) {
        gs(l, m, p) = 0.5 * (gamma(l, m, p) + gamma(l, p, m));
        for (std::size_t k = 0; k < n; ++k)
          dgs(k, l, m, p) = 0.5 * (ce.dgamma(k, l, m, p) + ce.dgamma(k, l, p, m));
      }

  nc.q_ = T3(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        double s = 0.0;
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d)
            s += gs(m, c, d) * nc.E_(c, a) * nc.E_(d, b);
        nc.q_(m, a, b) = s;
        nc.q_(m, b, a) = s;
      }

  // Cubic term of the autoparallel Taylor expansion x(1) = exp(u):
  //   x^m = x0 + u - (1/2) gs(u,u) - (1/6) [d gs - 2 gs gs](u,u,u).
  T4 w(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t mu = 0; mu < n; ++mu)
        for (std::size_t nu = 0; nu < n; ++nu) {
          double s = dgs(k, m, mu, nu);
          for (std::size_t r = 0; r < n; ++r)
            s -= 2.0 * gs(m, r, nu) * gs(r, k, mu);
          w(m, k, mu, nu) = s;
        }
  T4 wf(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t mu = 0; mu < n; ++mu)
              for (std::size_t nu = 0; nu < n; ++nu)
                s += w(m, k, mu, nu) * nc.E_(k, a) * nc.E_(mu, b) * nc.E_(nu, c);
          wf(m, a, b, c) = s;
        }
  nc.c_ = T4(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          nc.c_(m, a, b, c) =
              (wf(m, a, b, c) + wf(m, a, c, b) + wf(m, b, a, c) +
               wf(m, b, c, a) + wf(m, c, a, b) + wf(m, c, b, a)) /
              6.0;
  return nc;
}

Vec NormalChart::from_normal(const Vec& xi) const {
  const std::size_t n = x0_.size();
  Vec x = x0_;
  for (std::size_t m = 0; m < n; ++m) {
    double lin = 0.0, quad = 0.0, cub = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      lin += E_(m, a) * xi[a];
      for (std::size_t b = 0; b < n; ++b) {
        quad += q_(m, a, b) * xi[a] * xi[b];
        for (std::size_t c = 0; c < n; ++c)
          cub += c_(m, a, b, c) * xi[a] * xi[b] * xi[c];
      }
    }
    x[m] += lin - 0.5 * quad - cub / 6.0;
  }
  return x;
}

Mat NormalChart::from_normal_jacobian(const Vec& xi) const {
  const std::size_t n = x0_.size();
  Mat J(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t a = 0; a < n; ++a) {
      double s = E_(m, a);
      for (std::size_t b = 0; b < n; ++b) {
        s -= q_(m, a, b) * xi[b];
        for (std::size_t c = 0; c < n; ++c)
          s -= 0.5 * c_(m, a, b, c) * xi[b] * xi[c];
      }
      J(m, a) = s;
    }
  return J;
}

T3 NormalChart::from_normal_hessian(const Vec& xi) const {
  const std::size_t n = x0_.size();
  T3 H(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double s = -q_(m, a, b);
        for (std::size_t c = 0; c < n; ++c) s -= c_(m, a, b, c) * xi[c];
        H(m, a, b) = s;
      }
  return H;
}

Vec NormalChart::to_normal(const Vec& x) const {
  const std::size_t n = x0_.size();
  Vec delta(n);
  for (std::size_t m = 0; m < n; ++m) delta[m] = x[m] - x0_[m];
  Vec xi = matvec(E_inv_, delta);
  for (int iter = 0; iter < 64; ++iter) {
    const Vec fx = from_normal(xi);
    Vec r(n);
    double rmax = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      r[m] = fx[m] - x[m];
      rmax = std::max(rmax, std::fabs(r[m]));
    }
    if (rmax < 1e-13 * (1.0 + max_abs(x))) return xi;
    const Vec dxi = matvec(inverse(from_normal_jacobian(xi)), r);
    for (std::size_t m = 0; m < n; ++m) xi[m] -= dxi[m];
  }
  throw NumericalError("chart inversion did not converge");
}

Mat NormalChart::pullback_metric(const Vec& xi) const {
  const MetricEval me = st_->metric(from_normal(xi), 0);
  const Mat J = from_normal_jacobian(xi);
  return matmul(transpose(J), matmul(me.g, J));
}

T3 NormalChart::pullback_metric_derivative(const Vec& xi) const {
  const std::size_t n = x0_.size();
  const MetricEval me = st_->metric(from_normal(xi), 1);
  const Mat J = from_normal_jacobian(xi);
  const T3 H = from_normal_hessian(xi);
  T3 out(n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t nu = 0; nu < n; ++nu) {
            s += H(m, a, c) * me.g(m, nu) * J(nu, b);
            s += J(m, a) * me.g(m, nu) * H(nu, b, c);
            for (std::size_t l = 0; l < n; ++l)
              s += J(m, a) * J(nu, b) * me.dg(l, m, nu) * J(l, c);
          }
        out(c, a, b) = s;
        out(c, b, a) = s;
      }
  return out;
}

T3 NormalChart::pullback_connection(const Vec& xi) const {
  const std::size_t n = x0_.size();
  const Vec x = from_normal(xi);
  const T3 gamma = connection_at(*st_, kind_, x, 0).gamma;
  const Mat J = from_normal_jacobian(xi);
  const Mat Jinv = inverse(J);
  const T3 H = from_normal_hessian(xi);
  T3 out(n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          double inner = H(l, a, b);
          for (std::size_t m = 0; m < n; ++m)
            for (std::size_t nu = 0; nu < n; ++nu)
              inner += J(m, a) * J(nu, b) * gamma(l, m, nu);
          s += Jinv(c, l) * inner;
        }
        out(c, a, b) = s;
      }
  return out;
}

NormalChart::Diagnostics NormalChart::diagnostics(double probe_radius) const {
  const std::size_t n = x0_.size();
  Diagnostics d;
  const Vec zero(n, 0.0);
  const T3 g0 = pullback_connection(zero);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        d.symmetric_connection = std::max(
            d.symmetric_connection, std::fabs(0.5 * (g0(l, a, b) + g0(l, b, a))));

  if (kind_ == ConnectionKind::levi_civita) {
    const Mat gp = pullback_metric(zero);
    const Mat eta = st_->eta();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        d.metric_deviation = std::max(d.metric_deviation,
                                      std::fabs(gp(a, b) - eta(a, b)));
    d.metric_gradient = max_abs(pullback_metric_derivative(zero));
  } else {
    T3 torsion(n);
    if (kind_ == ConnectionKind::riemann_cartan) {
      torsion = st_->torsion(x0_, 0).T;
    } else {
      torsion =
          torsion_of_connection(connection_at(*st_, kind_, x0_, 0).gamma);
    }
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          d.torsion_match = std::max(
              d.torsion_match, std::fabs(2.0 * g0(l, a, b) - torsion(l, a, b)));
  }

  std::vector<Vec> probes;
  for (std::size_t a = 0; a < n; ++a) {
    Vec xi(n, 0.0);
    xi[a] = probe_radius;
    probes.push_back(xi);
    xi[a] = -probe_radius;
    probes.push_back(xi);
  }
  probes.push_back(Vec(n, probe_radius / std::sqrt(double(n))));
  for (const Vec& xi : probes) {
    const Vec back = to_normal(from_normal(xi));
    for (std::size_t a = 0; a < n; ++a)
      d.roundtrip = std::max(d.roundtrip, std::fabs(back[a] - xi[a]));
  }
  return d;
}

double lc_gamma_derivative_residual(const Spacetime& st, const NormalChart& chart,
                                    double h) {
  if (chart.kind() != ConnectionKind::levi_civita)
    throw ValidationError("expansion residual is defined for the metric connection");
  const std::size_t n = st.dim();
  const MetricEval me = st.metric(chart.center(), 2);
  const ConnectionEval lc = christoffel(me, 1);
  const T4 R = curvature_from(lc.gamma, lc.dgamma);
  FrameEval fe;
  fe.L = chart.frame();
  fe.L_inv = inverse(fe.L);
  const T4 Rp = frame_curvature(R, fe);

  double worst = 0.0;
  const double scale = std::max(1.0, max_abs(Rp));
  for (std::size_t m = 0; m < n; ++m) {
    Vec xp(n, 0.0), xm(n, 0.0);
    xp[m] = h;
    xm[m] = -h;
    const T3 gp = chart.pullback_connection(xp);
    const T3 gm = chart.pullback_connection(xm);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          const double deriv = (gp(l, b, c) - gm(l, b, c)) / (2 * h);
          const double expected = -(Rp(l, b, c, m) + Rp(l, c, b, m)) / 3.0;
          worst = std::max(worst, std::fabs(deriv - expected) / scale);
        }
  }
  return worst;
}

IMFResult construct_imf(const Spacetime& st, ConnectionKind kind, const Vec& x0,
                        const Vec& v0, double tau_end, const IntegrateOptions& opts) {
  const std::size_t n = st.dim();
  IMFResult res;
  res.curve = integrate_autoparallel(st, kind, x0, v0, tau_end, opts);
  {
    IntegrateOptions halved = opts;
    halved.step = opts.step / 2;
    const Trajectory fine =
        integrate_autoparallel(st, kind, x0, v0, tau_end, halved);
    res.autoparallel_defect =
        state_diff(res.curve.points.back().x, res.curve.points.back().v,
                   fine.points.back().x, fine.points.back().v);
  }
  const MetricEval me = st.metric(x0, 0);
  const Mat eta = st.eta();
  const Mat F0 = orthonormal_completion(me.g, eta, v0);
  res.frames = parallel_transport_frame(st, kind, res.curve, F0, opts);

  auto gram_defect = [&](const Mat& F, const Vec& x) {
    const Mat g = st.metric(x, 0).g;
    const Mat gram = matmul(transpose(F), matmul(g, F));
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        worst = std::max(worst, std::fabs(gram(a, b) - eta(a, b)));
    return worst;
  };
  res.orthonormality_defect = gram_defect(F0, x0);
  for (std::size_t i = 0; i < res.frames.size(); ++i)
    res.transport_defect = std::max(
        res.transport_defect, gram_defect(res.frames[i], res.curve.points[i].x));
  return res;
}

// ---------------------------------------------------------------- comoving

FermiChart FermiChart::build(const Spacetime& st, ConnectionKind kind,
                             const Trajectory& curve, const std::vector<Mat>& frames,
                             const IntegrateOptions& opts) {
  if (curve.points.size() != frames.size())
    throw ValidationError("curve and frame samples do not align");
  if (curve.points.size() < 9)
    throw ValidationError("curve too short for the difference stencils");
  FermiChart fc;
  fc.st_ = &st;
  fc.kind_ = kind;
  fc.grid_ = curve.points;
  fc.frames_ = frames;
  fc.opts_ = opts;
  if (fc.grid_.front().tau > fc.grid_.back().tau) {
    std::reverse(fc.grid_.begin(), fc.grid_.end());
    std::reverse(fc.frames_.begin(), fc.frames_.end());
  }
  const double h = fc.grid_[1].tau - fc.grid_[0].tau;
  for (std::size_t i = 0; i + 1 < fc.grid_.size(); ++i)
    if (std::fabs(fc.grid_[i + 1].tau - fc.grid_[i].tau - h) > 1e-9 * (1 + h))
      throw ValidationError("comoving chart needs a uniformly sampled curve");
  fc.h_ = h;
  return fc;
}

double FermiChart::tau_start() const { return grid_.front().tau; }
double FermiChart::tau_end() const { return grid_.back().tau; }

std::size_t FermiChart::grid_index(double tau, int margin) const {
  const double r = (tau - grid_.front().tau) / h_;
  const double ri = std::nearbyint(r);
  if (std::fabs(r - ri) > 1e-6)
    throw ValidationError("tau = " + format_double(tau) +
                          " is not on the comoving chart grid");
  const long i = static_cast<long>(ri);
  const long last = static_cast<long>(grid_.size()) - 1;
  if (i < margin || i > last - margin)
    throw ValidationError("tau = " + format_double(tau) +
                          " is too close to the end of the stored curve");
  return static_cast<std::size_t>(i);
}

double FermiChart::snap(double tau) const {
  const long last = static_cast<long>(grid_.size()) - 1;
  long i = static_cast<long>(std::nearbyint((tau - grid_.front().tau) / h_));
  i = std::clamp(i, 4l, last - 4);
  return grid_.front().tau + h_ * static_cast<double>(i);
}

Vec FermiChart::spatial_point(std::size_t i, const Vec& xi_spatial) const {
  const std::size_t n = grid_[i].x.size();
  Vec v(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t m = 0; m < n; ++m)
      v[m] += xi_spatial[j] * frames_[i](m, j + 1);
  if (max_abs(v) == 0.0) return grid_[i].x;
  return integrate_autoparallel(*st_, kind_, grid_[i].x, v, 1.0, opts_)
      .points.back()
      .x;
}

Vec FermiChart::from_fermi(const Vec& xi) const {
  const std::size_t n = grid_.front().x.size();
  if (xi.size() != n) throw ValidationError("chart point has the wrong dimension");
  const std::size_t i = grid_index(xi[0], 0);
  return spatial_point(i, Vec(xi.begin() + 1, xi.end()));
}

namespace {

// 5-point first derivative: (f(-2d) - 8 f(-d) + 8 f(d) - f(2d)) / (12 d).
Vec stencil_d1(const Vec& m2, const Vec& m1, const Vec& p1, const Vec& p2, double d) {
  Vec out(m2.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (m2[i] - 8 * m1[i] + 8 * p1[i] - p2[i]) / (12 * d);
  return out;
}

// 5-point second derivative:
// (-f(-2d) + 16 f(-d) - 30 f(0) + 16 f(d) - f(2d)) / (12 d^2).
Vec stencil_d2(const Vec& m2, const Vec& m1, const Vec& c, const Vec& p1,
               const Vec& p2, double d) {
  Vec out(m2.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (-m2[i] + 16 * m1[i] - 30 * c[i] + 16 * p1[i] - p2[i]) / (12 * d * d);
  return out;
}

}  // namespace

Mat FermiChart::metric_on_curve(double tau) const {
  const std::size_t i = grid_index(tau, 4);
  const std::size_t n = grid_[i].x.size();
  const double dt = 2 * h_;
  Mat J(n, n);
  {
    const Vec c0 = stencil_d1(grid_[i - 4].x, grid_[i - 2].x, grid_[i + 2].x,
                              grid_[i + 4].x, dt);
    for (std::size_t m = 0; m < n; ++m) J(m, 0) = c0[m];
  }
  const double ds = 1e-2;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    Vec xi(n - 1, 0.0);
    auto f = [&](double s) {
      xi[j] = s;
      const Vec p = spatial_point(i, xi);
      xi[j] = 0.0;
      return p;
    };
    const Vec cj = stencil_d1(f(-2 * ds), f(-ds), f(ds), f(2 * ds), ds);
    for (std::size_t m = 0; m < n; ++m) J(m, j + 1) = cj[m];
  }
  const Mat g = st_->metric(grid_[i].x, 0).g;
  return matmul(transpose(J), matmul(g, J));
}

T3 FermiChart::metric_derivative_on_curve(double tau) const {
  const std::size_t i = grid_index(tau, 4);
  const std::size_t n = grid_[i].x.size();
  const double dt = 2 * h_;
  const double ds = 1e-2;

  auto fsp = [&](long di, const Vec& xi_spatial) {
    return spatial_point(static_cast<std::size_t>(static_cast<long>(i) + di),
                         xi_spatial);
  };
  const Vec zero_sp(n - 1, 0.0);

  // first derivatives of the chart map
  Mat J(n, n);
  {
    const Vec c0 = stencil_d1(grid_[i - 4].x, grid_[i - 2].x, grid_[i + 2].x,
                              grid_[i + 4].x, dt);
    for (std::size_t m = 0; m < n; ++m) J(m, 0) = c0[m];
  }
  // cache the on-axis spatial samples, reused by J and the diagonal stencil
  std::vector<std::array<Vec, 4>> axis(n - 1);  // -2d, -d, +d, +2d
  for (std::size_t j = 0; j + 1 < n; ++j) {
    Vec xi = zero_sp;
    xi[j] = -2 * ds;
    axis[j][0] = fsp(0, xi);
    xi[j] = -ds;
    axis[j][1] = fsp(0, xi);
    xi[j] = ds;
    axis[j][2] = fsp(0, xi);
    xi[j] = 2 * ds;
    axis[j][3] = fsp(0, xi);
    const Vec cj = stencil_d1(axis[j][0], axis[j][1], axis[j][2], axis[j][3], ds);
    for (std::size_t m = 0; m < n; ++m) J(m, j + 1) = cj[m];
  }

  // second derivatives H(m, a, b)
  T3 H(n);
  {
    const Vec h00 = stencil_d2(grid_[i - 4].x, grid_[i - 2].x, grid_[i].x,
                               grid_[i + 2].x, grid_[i + 4].x, dt);
    for (std::size_t m = 0; m < n; ++m) H(m, 0, 0) = h00[m];
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Vec hjj = stencil_d2(axis[j][0], axis[j][1], grid_[i].x, axis[j][2],
                               axis[j][3], ds);
    for (std::size_t m = 0; m < n; ++m) H(m, j + 1, j + 1) = hjj[m];
  }
  // mixed second derivatives, Richardson-improved cross stencil:
  // (16 cross(d) - cross(2d)) / 15, cross(d) = (f(+,+) - f(+,-) - f(-,+) + f(-,-)) / (4 da db)
  auto cross_timespace = [&](std::size_t j, int scale) {
    const long step = 2 * scale;  // dt multiples in grid units
    const double da = scale * dt, db = scale * ds;
    Vec xi = zero_sp;
    xi[j] = db;
    const Vec pp = fsp(step, xi);
    const Vec mp = fsp(-step, xi);
    xi[j] = -db;
    const Vec pm = fsp(step, xi);
    const Vec mm = fsp(-step, xi);
    Vec out(n);
    for (std::size_t m = 0; m < n; ++m)
      out[m] = (pp[m] - pm[m] - mp[m] + mm[m]) / (4 * da * db);
    return out;
  };
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Vec c1 = cross_timespace(j, 1);
    const Vec c2 = cross_timespace(j, 2);
    for (std::size_t m = 0; m < n; ++m) {
      const double v = (16 * c1[m] - c2[m]) / 15;
      H(m, 0, j + 1) = v;
      H(m, j + 1, 0) = v;
    }
  }
  auto cross_spatial = [&](std::size_t j, std::size_t k, int scale) {
    const double d = scale * ds;
    Vec xi = zero_sp;
    auto f = [&](double a, double b) {
      xi[j] = a;
      xi[k] = b;
      const Vec p = fsp(0, xi);
      xi[j] = 0;
      xi[k] = 0;
      return p;
    };
    const Vec pp = f(d, d), pm = f(d, -d), mp = f(-d, d), mm = f(-d, -d);
    Vec out(n);
    for (std::size_t m = 0; m < n; ++m)
      out[m] = (pp[m] - pm[m] - mp[m] + mm[m]) / (4 * d * d);
    return out;
  };
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t k = j + 1; k + 1 < n; ++k) {
      const Vec c1 = cross_spatial(j, k, 1);
      const Vec c2 = cross_spatial(j, k, 2);
      for (std::size_t m = 0; m < n; ++m) {
        const double v = (16 * c1[m] - c2[m]) / 15;
        H(m, j + 1, k + 1) = v;
        H(m, k + 1, j + 1) = v;
      }
    }

  const MetricEval me = st_->metric(grid_[i].x, 1);
  T3 out(n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        double s = 0.0;
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t nu = 0; nu < n; ++nu) {
            s += H(m, a, c) * me.g(m, nu) * J(nu, b);
            s += J(m, a) * me.g(m, nu) * H(nu, b, c);
            for (std::size_t l = 0; l < n; ++l)
              s += J(m, a) * J(nu, b) * me.dg(l, m, nu) * J(l, c);
          }
        out(c, a, b) = s;
        out(c, b, a) = s;
      }
  return out;
}

}  // namespace cartan
