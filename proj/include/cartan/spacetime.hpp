// Spacetime documents: a coordinate chart, a metric, and optionally a
// torsion tensor and a moving frame, all given as coordinate expressions.
//
// Document format (line oriented, '#' comments):
//   name        <identifier>
//   coordinates <c0> <c1> ...          2 to 8 names
//   signature   <+->...                one sign per coordinate, default +--...
//   param       <name> = <const expr>  may reference earlier params
//   point       <v0> <v1> ...          reference point used for validation
//   domain      <coord> = (<lo>, <hi>) open interval hint; inf allowed
//   g[<i>,<j>]      = <expr>           metric component g_{ij}, mirrored
//   T[<l>,<m>,<n>]  = <expr>           torsion T^l_{mn}, mirrored with sign
//   e[<a>,<mu>]     = <expr>           frame vector a, coordinate component mu
// Component indices are coordinate names or zero-based integers; frame
// labels are integers.
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cartan/expression.hpp"
#include "cartan/linalg.hpp"

namespace cartan {

struct DomainInterval {
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
  bool contains(double v) const { return v > lo && v < hi; }
  bool bounded() const { return lo != -HUGE_VAL || hi != HUGE_VAL; }
};

struct SpacetimeSpec {
  std::string name;
  std::vector<std::string> coordinates;
  std::string signature;  // e.g. "+---"
  std::map<std::string, double> parameters;
  std::vector<DomainInterval> domain;
  std::optional<Vec> reference_point;

  std::vector<Expression> metric;   // n*n, symmetric
  std::vector<Expression> torsion;  // n*n*n when present, antisymmetric mirror
  std::vector<Expression> frame;    // n*n when present, L(mu, a) layout
  bool has_torsion = false;
  bool has_frame = false;

  std::size_t dim() const { return coordinates.size(); }
  std::size_t coord_index(const std::string& name) const;

  const Expression& metric_at(std::size_t i, std::size_t j) const {
    return metric[i * dim() + j];
  }
  const Expression& torsion_at(std::size_t l, std::size_t m, std::size_t n) const {
    return torsion[(l * dim() + m) * dim() + n];
  }
  const Expression& frame_at(std::size_t mu, std::size_t a) const {
    return frame[mu * dim() + a];
  }
};

SpacetimeSpec parse_spacetime(const std::string& text);
SpacetimeSpec load_spacetime_file(const std::string& path);

// Metric data at a point. Derivative blocks are filled up to `order`:
// dg(k,i,j) = d_k g_{ij}, d2g(k,l,i,j) = d_k d_l g_{ij}.
struct MetricEval {
  Mat g, g_inv;
  double det = 0.0;
  T3 dg;
  T4 d2g;
};

// T(l,m,n) = T^l_{mn}; dT(k,l,m,n) = d_k T^l_{mn}.
struct TorsionEval {
  T3 T;
  T4 dT;
};

// L(mu,a) = component mu of frame vector a; L_inv is the matrix inverse,
// dL(k,mu,a) = d_k L(mu,a), d2L(k,l,mu,a) = d_k d_l L(mu,a).
struct FrameEval {
  Mat L, L_inv;
  T3 dL;
  T4 d2L;
};

enum class TangentClass { timelike, lightlike, spacelike };
const char* to_string(TangentClass c);

// A spec bound to parameter values, ready for pointwise evaluation.
class Spacetime {
 public:
  explicit Spacetime(SpacetimeSpec spec,
                     const std::map<std::string, double>& param_overrides = {});

  const SpacetimeSpec& spec() const { return spec_; }
  const EvalScope& scope() const { return scope_; }
  std::size_t dim() const { return spec_.dim(); }
  bool has_torsion() const { return spec_.has_torsion; }
  bool has_frame() const { return spec_.has_frame; }
  const std::map<std::string, double>& parameters() const { return params_; }

  // Signature as a diagonal matrix, e.g. diag(1,-1,-1,-1).
  Mat eta() const;

  bool in_domain(const Vec& x) const;
  void check_domain(const Vec& x) const;  // throws ValidationError

  MetricEval metric(const Vec& x, int order = 2) const;
  TorsionEval torsion(const Vec& x, int order = 1) const;
  FrameEval frame(const Vec& x, int order = 2) const;

  double interval(const Vec& x, const Vec& u, const Vec& v) const;

  // Checks the metric signature (eigenvalue signs) and, when a frame is
  // declared, its g-orthonormality at the given point.
  void validate_at(const Vec& x) const;

 private:
  SpacetimeSpec spec_;
  std::map<std::string, double> params_;
  EvalScope scope_;
};

// Sign of g(v,v) normalized by the Euclidean norm of v, so the verdict is
// invariant under positive rescaling of v.
TangentClass classify_tangent(const Spacetime& st, const Vec& x, const Vec& v,
                              double lightlike_tol = 1e-10);

}  // namespace cartan
