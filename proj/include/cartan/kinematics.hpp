// Kinematics of a unit timelike field Z: the covariant derivative of its
// metric dual alpha splits into acceleration, vorticity, shear, and
// expansion,
//   B(mu,nu) = D_nu alpha_mu
//            = a_mu alpha_nu + omega_{mu nu} + sigma_{mu nu}
//              + expansion/(n-1) h_{mu nu},
// where h = g - alpha (x) alpha projects onto the screen orthogonal to Z.
// The split exists for any metric-compatible connection; torsion shifts
// each piece relative to the metric-connection values by contorsion terms.
#pragma once

#include "cartan/connection.hpp"

namespace cartan {

// Vector field with one component expression per coordinate. Decomposition
// operations require `normalized` (g(Z,Z) = 1 as an identity in the
// coordinates); build one explicitly with unit_normalize.
struct ReferenceFrameField {
  std::vector<Expression> Z;
  bool normalized = false;
};

// Parses one expression per coordinate; every symbol must be a coordinate
// or parameter of the spacetime.
ReferenceFrameField parse_frame_field(const Spacetime& st,
                                      const std::vector<std::string>& components,
                                      bool normalized = false);

// V^mu / sqrt(g(V,V)) assembled symbolically from the metric expressions.
// Evaluating the result where V is not timelike raises the sqrt domain
// error.
ReferenceFrameField unit_normalize(const SpacetimeSpec& spec,
                                   const ReferenceFrameField& field);

// Field value and coordinate derivatives: dZ(k, mu) = d_k Z^mu.
struct FrameFieldEval {
  Vec Z;
  Mat dZ;
};

// order 0 skips dZ. A field declared normalized is verified to satisfy
// |g(Z,Z) - 1| <= norm_tol at x.
FrameFieldEval eval_frame_field(const Spacetime& st, const ReferenceFrameField& field,
                                const Vec& x, int order = 1,
                                double norm_tol = 1e-9);

struct KinematicDecomposition {
  Vec alpha;    // lowered field, alpha_mu = g_{mu nu} Z^nu
  Vec a;        // acceleration 1-form, a_mu = B_{mu nu} Z^nu
  Mat omega;    // vorticity: antisymmetric, both Z-contractions vanish
  Mat sigma;    // shear: symmetric, g-traceless, both Z-contractions vanish
  double expansion = 0.0;
  Mat h;        // projector h_{mu nu} = g_{mu nu} - alpha_mu alpha_nu
  Mat B;        // B(mu, nu) = D_nu alpha_mu
};

// Decomposition with the chosen connection, coordinate-basis components.
// Throws unless the field is declared normalized and is unit at x.
KinematicDecomposition decompose(const Spacetime& st, ConnectionKind kind,
                                 const ReferenceFrameField& field, const Vec& x);

// Shorthand for the metric connection.
KinematicDecomposition decompose_levi_civita(const Spacetime& st,
                                             const ReferenceFrameField& field,
                                             const Vec& x);

// Same split driven by the declared frame field, taking Z = e_0; every
// returned component is in the frame basis (so h = eta - e^0 (x) e^0).
// The frame must be g-orthonormal at x.
KinematicDecomposition decompose_orthonormal(const Spacetime& st, const Vec& x);

// Additive corrections the torsion produces on top of the metric-connection
// decomposition, in the orthonormal frame adapted to Z (column 0 = Z):
//   T0(a,b) =  (1/2) T'^0_{ab}   (antisymmetric)
//   S0(a,b) = -(1/2) S'^0_{ab}   (symmetric)
// with T', S' the frame components of torsion and strain. Writing d_E for
// the expansion difference (= eta-trace of S0), the spatial blocks obey
//   omega' = omega'_metric + T0,
//   sigma' = sigma'_metric + S0 - d_E/(n-1) h',
// and the 0-row feeds the acceleration: a'_i = a'_metric,i + S0(0,i) - T0(0,i).
struct TorsionCorrections {
  Mat T0;
  Mat S0;
};

struct RiemannCartanDecomposition {
  KinematicDecomposition full;     // declared-torsion connection
  KinematicDecomposition metric;   // metric-connection comparison
  TorsionCorrections corrections;  // frame-basis shifts, see above
  Mat adapted_frame;               // orthonormal columns, column 0 = Z(x)
};

RiemannCartanDecomposition decompose_riemann_cartan(const Spacetime& st,
                                                    const ReferenceFrameField& field,
                                                    const Vec& x);

// Orthonormal frame matrix with column 0 = Z(x), remaining columns
// completed from coordinate directions.
Mat adapted_orthonormal_frame(const Spacetime& st, const ReferenceFrameField& field,
                              const Vec& x);

// Vorticity covector in the adapted orthonormal frame (dimension 4,
// signature +--- only): v^i = eps^{0ijk} omega'_{jk} with eps^{0123} = +1,
// entry 0 always zero. Vanishes exactly when alpha ^ d alpha does.
Vec vorticity_covector(const Spacetime& st, const ReferenceFrameField& field,
                       const Vec& x);

// Coordinate components of the 3-form alpha ^ d alpha; identically zero
// exactly when the field is hypersurface orthogonal near x.
T3 alpha_wedge_dalpha(const Spacetime& st, const ReferenceFrameField& field,
                      const Vec& x);

}  // namespace cartan
