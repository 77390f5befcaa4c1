// Residual-based predicates on reference frames: global and proper inertial
// frame checks, their curvature obstruction, local inertial charts for the
// metric and torsionful structures, the torsion antisymmetry condition, and
// chart adaptation. Every verdict reports the measured residuals; holds is
// always "every residual <= tolerance", never a bare boolean.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "cartan/kinematics.hpp"
#include "cartan/transport.hpp"

namespace cartan {

struct FrameVerdict {
  std::string predicate;
  bool holds = false;
  std::map<std::string, double> residuals;  // criterion -> worst value seen
  double tolerance = 0.0;
};

// Inertial reference frame: the covariant derivative of the metric dual of
// Z vanishes everywhere sampled, equivalently acceleration, vorticity,
// shear, and expansion are all zero. The connection argument lets the same
// field be judged against the metric, torsionful, or flat-transport
// structure (a congruence can fail the first and hold for the last).
FrameVerdict irf_check(const Spacetime& st, const ReferenceFrameField& field,
                       const std::vector<Vec>& samples, double tol,
                       ConnectionKind kind = ConnectionKind::levi_civita);

// Necessary condition for extending Z to an everywhere-inertial field of
// the metric connection: the Ricci contraction Ric(Z, -) must vanish. A
// nonzero value certifies exclusion; zero (e.g. any vacuum solution) says
// nothing either way.
struct RicciObstruction {
  double max_component = 0.0;   // worst |Ric(Z, e_nu)| over samples and nu
  bool obstructed = false;      // max_component > tol
  std::vector<Vec> per_sample;  // Ric(Z, e_nu) rows, one per sample
};
RicciObstruction irf_obstruction_ricci(const Spacetime& st,
                                       const ReferenceFrameField& field,
                                       const std::vector<Vec>& samples, double tol);

// Proper inertial reference frame: free fall (D_Z Z = 0) plus hypersurface
// orthogonality (alpha ^ d alpha = 0) at every sample.
FrameVerdict pirf_check(const Spacetime& st, const ReferenceFrameField& field,
                        const std::vector<Vec>& samples, double tol,
                        ConnectionKind kind = ConnectionKind::levi_civita);

// Local inertial frame along a worldline, metric structure: the frame rides
// the curve (e_0 = velocity), stays g-orthonormal, and the comoving chart
// shows g = eta with vanishing first derivative on the curve. All criteria
// are evaluated on the curve only; away from it the chart metric gradient
// is generically nonzero at second order in the distance.
FrameVerdict lirf_lorentzian_check(const Spacetime& st, const IMFResult& imf,
                                   const FermiChart& chart, double tol);

// Single-event variant: metric, metric gradient, and connection
// coefficients of the chart at its center.
FrameVerdict lirf_lorentzian_check(const NormalChart& chart, double tol);

// Local inertial frame for the torsionful structure, judged along the
// curve of a transported frame: e_0 = velocity, orthonormality, vanishing
// frame-basis connection coefficients (transport defect via difference
// quotients of the stored frames), no rotation of the spatial legs under
// the full connection, and the rotation-equals-torsion criterion: relative
// to metric transport the legs must rotate at exactly half the frame
// torsion rate, antisym(M0)_ij = T'_{0ij} / 2 where M0(a,b) is the metric
// covariant derivative g(e_a, D0_dot e_b).
FrameVerdict lirf_rc_check(const Spacetime& st, const IMFResult& imf, double tol);

// Whether the lowered torsion is totally antisymmetric, reported two ways:
// distance from its total antisymmetrization and the size of the induced
// strain (both vanish together). Throws unless torsion is declared.
struct AntisymmetryReport {
  bool totally_antisymmetric = false;
  double antisym_violation = 0.0;  // max |T_lowered - antisymmetrization|
  double strain_violation = 0.0;   // max |S|
  double max_violation = 0.0;      // max of the two
};
AntisymmetryReport antisymmetry_condition(const Spacetime& st,
                                          const std::vector<Vec>& samples,
                                          double tol);

// Chart adaptation: the spatial components of Z vanish at every sample
// (the chart is comoving with the congruence).
FrameVerdict nacs_check(const Spacetime& st, const ReferenceFrameField& field,
                        const std::vector<Vec>& samples, double tol);

}  // namespace cartan
