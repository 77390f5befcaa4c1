// Shared fixtures: closed-form geometries with independently known values,
// plus a lumpy metric-and-torsion example for identity checks.
#pragma once

#include <string>

#include "cartan/spacetime.hpp"

namespace fixtures {

inline cartan::Spacetime minkowski() {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name minkowski
coordinates t x y z
signature +---
point 0 0 0 0
g[t,t] = 1
g[x,x] = -1
g[y,y] = -1
g[z,z] = -1
)")};
}

inline cartan::Spacetime sphere() {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name sphere
coordinates theta phi
signature ++
domain theta = (-6.3, 6.3)
point pi/3 0
g[theta,theta] = 1
g[phi,phi]     = sin(theta)^2
)")};
}

inline cartan::Spacetime schwarzschild(double mass = 1.0) {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name schwarzschild
coordinates t r theta phi
signature +---
param M = 1
domain r = (2.001, 1e6)
domain theta = (0.001, 3.141)
point 0 6 pi/2 0
g[t,t]         = 1 - 2*M/r
g[r,r]         = -1/(1 - 2*M/r)
g[theta,theta] = -r^2
g[phi,phi]     = -r^2*sin(theta)^2
)"),
                           {{"M", mass}}};
}

inline cartan::Spacetime flrw() {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name flrw
coordinates t x y z
signature +---
domain t = (0.001, inf)
point 1 0 0 0
g[t,t] = 1
g[x,x] = -t^(4/3)
g[y,y] = -t^(4/3)
g[z,z] = -t^(4/3)
)")};
}

// Smooth bumpy Lorentzian metric with generic torsion; no closed-form
// curvature, used purely for structural identities.
inline cartan::Spacetime lumpy_rc() {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name lumpy
coordinates t x y z
signature +---
point 0.3 0.1 -0.2 0.4
g[t,t] = 1 + 0.1*sin(x)*cos(y)
g[x,x] = -1 - 0.1*cos(z)^2
g[y,y] = -1 - 0.05*sin(t + x)
g[z,z] = -1 - 0.1*exp(-x^2)
g[t,x] = 0.05*sin(x + z)
g[x,y] = 0.04*cos(t - y)
g[y,z] = 0.03*sin(x*z)
T[t,x,y] = 0.1*cos(z)
T[x,y,z] = 0.05*sin(t + x)
T[z,t,x] = 0.08*cos(y)
T[y,t,z] = 0.06*sin(x - y)
)")};
}

// Flat metric carrying totally antisymmetric torsion: the strain tensor
// vanishes, so autoparallels coincide with geodesics.
inline cartan::Spacetime flat_antisymmetric_torsion(double k = 0.3) {
  const std::string kk = cartan::format_double(k);
  return cartan::Spacetime{cartan::parse_spacetime(
      "name flat-antisym\n"
      "coordinates t x y z\n"
      "point 0 0 0 0\n"
      "g[t,t] = 1\ng[x,x] = -1\ng[y,y] = -1\ng[z,z] = -1\n"
      "T[x,y,z] = " + kk + "\n"
      "T[y,z,x] = " + kk + "\n"
      "T[z,x,y] = " + kk + "\n")};
}

inline cartan::Spacetime sphere_teleparallel() {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name sphere-teleparallel
coordinates theta phi
signature ++
domain theta = (0.001, 3.141)
point pi/3 0
g[theta,theta] = 1
g[phi,phi]     = sin(theta)^2
e[0,theta] = 1
e[1,phi]   = 1/sin(theta)
)")};
}

// Minkowski in cylindrical coordinates with the rigidly rotating tetrad
// declared: e_0 follows the angular-rate-Om congruence, e_2 its azimuthal
// companion. Closed forms: |a| = gamma^2 Om^2 r, vorticity gamma^2 Om with
// gamma = 1/sqrt(1 - Om^2 r^2).
inline cartan::Spacetime langevin(double om = 0.3) {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name langevin
coordinates t r phi z
signature +---
param Om = 0.3
domain r = (0.01, 3)
point 0 0.5 0.7 0
g[t,t]     = 1
g[r,r]     = -1
g[phi,phi] = -r^2
g[z,z]     = -1
e[0,t]   = 1/sqrt(1 - Om^2*r^2)
e[0,phi] = Om/sqrt(1 - Om^2*r^2)
e[1,r]   = 1
e[2,t]   = Om*r/sqrt(1 - Om^2*r^2)
e[2,phi] = 1/(r*sqrt(1 - Om^2*r^2))
e[3,z]   = 1
)"),
                           {{"Om", om}}};
}

// FLRW metric with the comoving orthonormal tetrad declared.
inline cartan::Spacetime flrw_frame() {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name flrw-frame
coordinates t x y z
signature +---
domain t = (0.001, inf)
point 1 0 0 0
g[t,t] = 1
g[x,x] = -t^(4/3)
g[y,y] = -t^(4/3)
g[z,z] = -t^(4/3)
e[0,t] = 1
e[1,x] = t^(-2/3)
e[2,y] = t^(-2/3)
e[3,z] = t^(-2/3)
)")};
}

// Flat metric with the constant torsion component tuned to cancel, at the
// origin, the vorticity of the rigid rotation congruence with rate Om.
inline cartan::Spacetime rotating_cancel_torsion(double om = 0.25) {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name rotating-cancel
coordinates t x y z
signature +---
param Om = 0.25
point 0 0 0 0
g[t,t] = 1
g[x,x] = -1
g[y,y] = -1
g[z,z] = -1
T[t,x,y] = -2*Om
)"),
                           {{"Om", om}}};
}

// Flat metric with totally antisymmetric torsion in a timelike plane:
// lowered components T_{txy} = k and its permutations, so the strain
// vanishes but the time-indexed components are nonzero.
inline cartan::Spacetime flat_timelike_antisymmetric_torsion(double k = 0.2) {
  const std::string kk = cartan::format_double(k);
  return cartan::Spacetime{cartan::parse_spacetime(
      "name flat-antisym-timelike\n"
      "coordinates t x y z\n"
      "point 0 0 0 0\n"
      "g[t,t] = 1\ng[x,x] = -1\ng[y,y] = -1\ng[z,z] = -1\n"
      "T[t,x,y] = " + kk + "\n"
      "T[x,t,y] = " + kk + "\n"
      "T[y,t,x] = -" + kk + "\n")};
}

inline cartan::Spacetime rindler() {
  return cartan::Spacetime{cartan::parse_spacetime(R"(
name rindler
coordinates t x y z
signature +---
domain x = (0.001, inf)
point 0 1 0 0
g[t,t] = x^2
g[x,x] = -1
g[y,y] = -1
g[z,z] = -1
)")};
}

}  // namespace fixtures
