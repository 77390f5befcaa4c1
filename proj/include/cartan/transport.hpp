// Autoparallel integration, parallel transport, inertial moving frames, and
// chart constructions centered on a point (normal) or a worldline (comoving).
#pragma once

#include <optional>
#include <vector>

#include "cartan/connection.hpp"
#include "cartan/spacetime.hpp"

namespace cartan {

// Thrown when a trajectory leaves the declared chart domain; carries the
// last state inside the domain.
struct DomainError : Error {
  DomainError(const std::string& what, double tau, Vec x, Vec v)
      : Error(what), tau(tau), x(std::move(x)), v(std::move(v)) {}
  double tau;
  Vec x, v;
};

enum class StepScheme { rk4_fixed, rk4_halving };

struct IntegrateOptions {
  double step = 1e-2;
  StepScheme scheme = StepScheme::rk4_halving;
};

struct TrajectoryPoint {
  double tau = 0.0;
  Vec x, v;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  // Largest full-step vs two-half-steps discrepancy seen (rk4_halving only);
  // an a posteriori error indicator, not a bound.
  double defect = 0.0;

  double tau_start() const { return points.front().tau; }
  double tau_end() const { return points.back().tau; }
  // Cubic Hermite interpolation between stored samples.
  TrajectoryPoint at(double tau) const;
};

// Integrates x'' = -Gamma(x)(x', x') from (x0, v0) over [0, tau_end]
// (tau_end may be negative). Throws DomainError when the curve leaves the
// chart, NumericalError on non-finite states.
Trajectory integrate_autoparallel(const Spacetime& st, ConnectionKind kind,
                                  const Vec& x0, const Vec& v0, double tau_end,
                                  const IntegrateOptions& opts = {});

// Endpoint of the unit-time autoparallel with initial velocity v0.
Vec exponential_map(const Spacetime& st, ConnectionKind kind, const Vec& x0,
                    const Vec& v0, const IntegrateOptions& opts = {});

// Transports the columns of F0 along the curve: u' = -Gamma(x)(x', u).
// Returns one matrix per trajectory sample.
std::vector<Mat> parallel_transport_frame(const Spacetime& st, ConnectionKind kind,
                                          const Trajectory& curve, const Mat& F0,
                                          const IntegrateOptions& opts = {});

// Chart centered at x0 that agrees with the exponential map of the chosen
// connection through third order,
//   x(xi) = x0 + u - (1/2) Gs(u,u) - (1/6) [dGs - 2 Gs Gs](u,u,u),  u = E xi,
// where Gs is the symmetric part of the connection at x0. The symmetric
// part of the pulled-back connection vanishes at the center and its first
// derivative there carries only curvature. For the metric connection E is
// a g-orthonormal basis (so the pulled-back metric at the center is eta);
// torsionful kinds keep E = identity and retain the antisymmetric part,
// Gamma'(0) = T'(0)/2.
class NormalChart {
 public:
  static NormalChart build(const Spacetime& st, ConnectionKind kind, const Vec& x0);

  ConnectionKind kind() const { return kind_; }
  const Vec& center() const { return x0_; }
  const Mat& frame() const { return E_; }

  Vec from_normal(const Vec& xi) const;
  Mat from_normal_jacobian(const Vec& xi) const;
  // H(m,a,b) = d^2 x^m / dxi^a dxi^b at xi.
  T3 from_normal_hessian(const Vec& xi) const;
  // Newton inversion of from_normal. Throws NumericalError if it fails.
  Vec to_normal(const Vec& x) const;

  Mat pullback_metric(const Vec& xi) const;
  // Exact first derivative of the pulled-back metric: out(c,a,b).
  T3 pullback_metric_derivative(const Vec& xi) const;
  // Connection coefficients of this chart's kind, read in the chart.
  T3 pullback_connection(const Vec& xi) const;

  struct Diagnostics {
    double metric_deviation = 0.0;      // |g'(0) - eta|, metric kind only
    double symmetric_connection = 0.0;  // |sym Gamma'(0)|
    double metric_gradient = 0.0;       // |dg'(0)|, metric kind only
    double torsion_match = 0.0;         // |2 Gamma'(0) - T'(0)|, torsionful kinds
    double roundtrip = 0.0;             // |to_normal(from_normal(xi)) - xi|
  };
  Diagnostics diagnostics(double probe_radius = 1e-2) const;

 private:
  const Spacetime* st_ = nullptr;
  ConnectionKind kind_ = ConnectionKind::levi_civita;
  Vec x0_;
  Mat E_, E_inv_;
  T3 q_;  // symmetrized connection contracted with E on both slots
  T4 c_;  // cubic map coefficient, symmetric in the last three slots
};

// Residual of the first curvature correction to the metric connection in a
// metric normal chart: at the center,
//   d Gamma'^l_{bc} / d xi^m + (R'^l_{b c m} + R'^l_{c b m})/3 = 0.
// Returns the largest residual over all components, relative to the
// curvature scale; the derivative is a central difference with spacing h.
double lc_gamma_derivative_residual(const Spacetime& st, const NormalChart& chart,
                                    double h = 1e-2);

// An autoparallel worldline carrying a parallel-transported orthonormal
// frame whose timelike leg is the normalized tangent.
struct IMFResult {
  Trajectory curve;
  std::vector<Mat> frames;
  double autoparallel_defect = 0.0;    // half-step re-integration endpoint shift
  double orthonormality_defect = 0.0;  // |F^T g F - eta| at the start
  double transport_defect = 0.0;       // worst |F^T g F - eta| along the curve
};
IMFResult construct_imf(const Spacetime& st, ConnectionKind kind, const Vec& x0,
                        const Vec& v0, double tau_end,
                        const IntegrateOptions& opts = {});

// Comoving chart along a framed worldline: xi^0 picks the point on the
// curve, spatial xi ride the frame legs through the exponential map,
//   x(xi) = exp_{curve(xi^0)}(xi^i e_i(xi^0)).
// Metric data on the curve comes from high-order finite differences of
// that map, so the stored curve is resampled on a uniform grid.
class FermiChart {
 public:
  static FermiChart build(const Spacetime& st, ConnectionKind kind,
                          const Trajectory& curve, const std::vector<Mat>& frames,
                          const IntegrateOptions& opts = {});

  double tau_start() const;
  double tau_end() const;
  // Nearest on-grid parameter to tau that has the two-sided margin needed
  // by the difference stencils.
  double snap(double tau) const;

  Vec from_fermi(const Vec& xi) const;
  Mat metric_on_curve(double tau) const;
  T3 metric_derivative_on_curve(double tau) const;

 private:
  const Spacetime* st_ = nullptr;
  ConnectionKind kind_ = ConnectionKind::levi_civita;
  double h_ = 0.0;  // grid spacing
  std::vector<TrajectoryPoint> grid_;
  std::vector<Mat> frames_;
  IntegrateOptions opts_;

  std::size_t grid_index(double tau, int margin) const;
  Vec spatial_point(std::size_t i, const Vec& xi_spatial) const;
};

}  // namespace cartan
