// Connections and curvature. Index conventions used throughout:
//   D_{e_m} e_n = Gamma^l_{mn} e_l   (first lower index is the derivative
//                                     direction), stored gamma(l, m, n);
//   curvature R^l_{m ab} measures [D_a, D_b] acting on e_m and is stored
//   R(l, m, a, b), antisymmetric in (a, b);
//   torsion T^l_{mn} is antisymmetric in (m, n), stored T(l, m, n).
#pragma once

#include "cartan/linalg.hpp"
#include "cartan/spacetime.hpp"

namespace cartan {

enum class ConnectionKind { levi_civita, riemann_cartan, teleparallel };
const char* to_string(ConnectionKind k);
ConnectionKind parse_connection_kind(const std::string& name);

// gamma(l,m,n) = Gamma^l_{mn}; dgamma(k,l,m,n) = d_k Gamma^l_{mn} when
// computed to order >= 1.
struct ConnectionEval {
  T3 gamma;
  T4 dgamma;
};

// d_k g^{ij} from the metric derivative, via  d(g^-1) = -g^-1 (dg) g^-1.
T3 metric_inverse_derivative(const MetricEval& me);

// Metric (Levi-Civita) connection
//   Gamma^n_{ma} = 1/2 g^{nk} (d_m g_{ka} + d_a g_{km} - d_k g_{ma}).
// order >= 1 also fills dgamma (requires me.d2g).
ConnectionEval christoffel(const MetricEval& me, int order = 1);

// Strain tensor of the torsion, symmetric in its lower pair:
//   S^l_{mn} = -g^{ls} (g_{ma} T^a_{ns} + g_{na} T^a_{ms}).
struct StrainEval {
  T3 S;
  T4 dS;
};
StrainEval strain(const MetricEval& me, const TorsionEval& te, int order = 0);

// Contorsion K = (T + S)/2, the difference between the metric-compatible
// torsionful connection and the Levi-Civita one.
ConnectionEval contorsion(const MetricEval& me, const TorsionEval& te, int order = 1);

// Full metric-compatible connection with the given torsion: Gamma_lc + K.
ConnectionEval rc_connection(const MetricEval& me, const TorsionEval& te,
                             int order = 1);

// Flat connection that keeps the declared frame parallel:
//   Gamma^n_{ml} = -(d_m L^n_b) (L^-1)^b_l.
ConnectionEval teleparallel_connection(const FrameEval& fe, int order = 1);

// Curvature of connection coefficients given in some basis e_a:
//   R^l_{m ab} = e_a(g^l_{bm}) - e_b(g^l_{am})
//              + g^l_{ak} g^k_{bm} - g^l_{bk} g^k_{am} - c^k_{ab} g^l_{km},
// where dgamma_dir(a,l,b,m) = e_a(g^l_{bm}) and c holds the commutation
// coefficients [e_a, e_b] = c^k_{ab} e_k (pass nullptr in a coordinate
// basis, where they vanish).
T4 curvature_from(const T3& gamma, const T4& dgamma_dir, const T3* c = nullptr);

// Torsion of a connection: T^l_{mn} = g^l_{mn} - g^l_{nm} - c^l_{mn}.
T3 torsion_of_connection(const T3& gamma, const T3* c = nullptr);

// Ricci(m,b) = R^l_{m l b}; scalar = g^{mb} Ricci(m,b).
Mat ricci_from(const T4& R);
double ricci_scalar(const Mat& ricci, const Mat& g_inv);

// Lower the upper index: out(l,m,n) = g_{lk} t^k_{mn}.
T3 lower_first_index(const T3& t, const Mat& g);

// Commutation coefficients of the declared frame,
//   c^a_{bc} = (L^-1)^a_m (L^n_b d_n L^m_c - L^n_c d_n L^m_b).
T3 structure_coefficients(const FrameEval& fe);

// Connection coefficients of `conn` read in the declared frame:
//   g'^a_{bc} = (L^-1)^a_l (L^m_b d_m L^l_c + L^m_b L^n_c Gamma^l_{mn}).
T3 frame_connection(const ConnectionEval& conn, const FrameEval& fe);

// Tensor change of basis into the frame.
T4 frame_curvature(const T4& R, const FrameEval& fe);
T3 frame_tensor_udd(const T3& t, const FrameEval& fe);

// Connection coefficients at a point for the requested kind. Requires a
// declared torsion for riemann_cartan (absent torsion degrades to metric
// connection) and a declared frame for teleparallel.
ConnectionEval connection_at(const Spacetime& st, ConnectionKind kind, const Vec& x,
                             int order = 0);

// Completes the seed vector to a full g-orthonormal basis whose Gram matrix
// is eta. Column 0 is the normalized seed; the sign of g(seed,seed) must
// match eta(0,0). Remaining columns come from coordinate directions by
// Gram-Schmidt, most independent first.
Mat orthonormal_completion(const Mat& g, const Mat& eta, const Vec& seed);

// Splits the curvature of the torsionful connection into the Levi-Civita
// part and the contorsion contribution:
//   R_total^l_{m ab} = R_lc^l_{m ab} + J(l,m,a,b) - J(l,m,b,a),
//   J(l,m,a,b) = Dlc_a K^l_{bm} - K^s_{am} K^l_{bs}.
struct CurvatureSplit {
  T4 R_total;
  T4 R_lc;
  T4 J;
};
CurvatureSplit curvature_split(const MetricEval& me, const TorsionEval& te);

}  // namespace cartan
