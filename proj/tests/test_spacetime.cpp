#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cartan/spacetime.hpp"

using namespace cartan;

namespace {

const char* kSchwarzschildDoc = R"(
# static spherically symmetric vacuum
name schw
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
)";

const char* kTorsionDoc = R"(
coordinates t x y z
T[x,y,z] = 0.3
T[y,z,x] = 0.3*t
g[t,t] = 1
g[x,x] = -1
g[y,y] = -1
g[z,z] = -1
)";

}  // namespace

TEST_CASE("document parse fills the spec") {
  const SpacetimeSpec spec = parse_spacetime(kSchwarzschildDoc);
  CHECK(spec.name == "schw");
  CHECK(spec.dim() == 4);
  CHECK(spec.signature == "+---");
  CHECK(spec.parameters.at("M") == 1.0);
  CHECK(spec.coord_index("theta") == 2);
  CHECK(spec.domain[1].lo == doctest::Approx(2.001));
  CHECK(spec.domain[0].bounded() == false);
  REQUIRE(spec.reference_point.has_value());
  CHECK((*spec.reference_point)[2] == doctest::Approx(M_PI / 2));
  CHECK(!spec.has_torsion);
  CHECK(spec.metric_at(0, 0).str() == spec.metric_at(0, 0).str());
}

TEST_CASE("parse errors name the line") {
  auto expect_fail = [](const std::string& doc, const char* fragment) {
    try {
      parse_spacetime(doc);
      FAIL_CHECK("expected ParseError for: ", fragment);
    } catch (const ParseError& pe) {
      CHECK_MESSAGE(std::string(pe.what()).find(fragment) != std::string::npos,
                    pe.what());
    }
  };
  expect_fail("g[x,x] = 1", "coordinates must be declared first");
  expect_fail("coordinates x\ng[x,x] = 1", "2 to 8");
  expect_fail("coordinates t x\ng[t,t] = 1\ng[t,t] = 2", "duplicate metric");
  expect_fail("coordinates t x\ng[t,t] = 1\ng[q,t] = 2", "not a coordinate");
  expect_fail("coordinates t x\ng[t,t] = 1\nT[t,x,x] = 1", "antisymmetric");
  expect_fail("coordinates t x\ng[t,t] = 1\nT[t,x,t] = 1\nT[t,t,x] = 2",
              "duplicate torsion");
  expect_fail("coordinates t x\nsignature +\ng[t,t] = 1\ng[x,x] = -1",
              "signature length");
  expect_fail("coordinates t x", "no metric");
  expect_fail("coordinates t x\ng[t,t] = 1 +", "in expression");
  expect_fail("coordinates t x\ng[t,t] = 1 + Q", "unknown identifier 'Q'");
  expect_fail("coordinates t x\nparam t = 1\ng[t,t] = 1", "shadows");
  expect_fail("coordinates t x\ndomain x = (2, 1)\ng[t,t] = 1", "empty");
  expect_fail("coordinates t x\npoint 0 5\ndomain x = (0, 1)\ng[t,t] = 1",
              "outside the declared domain");
  expect_fail("flavor up\ncoordinates t x\ng[t,t] = 1", "unknown directive");
}

TEST_CASE("metric evaluation with derivatives") {
  const Spacetime st(parse_spacetime(kSchwarzschildDoc));
  const Vec x{0.0, 6.0, M_PI / 2, 0.0};
  const MetricEval me = st.metric(x);
  CHECK(me.g(0, 0) == doctest::Approx(1 - 2.0 / 6.0));
  CHECK(me.g(1, 1) == doctest::Approx(-1.5));
  CHECK(me.g(2, 2) == doctest::Approx(-36.0));
  CHECK(me.g(3, 3) == doctest::Approx(-36.0));
  CHECK(me.g(0, 1) == 0.0);
  CHECK(me.g_inv(0, 0) == doctest::Approx(1.5));
  CHECK(me.det == doctest::Approx(-(1 - 1.0 / 3.0) * 1.5 * 36.0 * 36.0));
  // d_r g_tt = 2M/r^2
  CHECK(me.dg(1, 0, 0) == doctest::Approx(2.0 / 36.0));
  // d_r d_r g_tt = -4M/r^3
  CHECK(me.d2g(1, 1, 0, 0) == doctest::Approx(-4.0 / 216.0));
  // d_theta g_phiphi = -2 r^2 sin cos = 0 at equator
  CHECK(me.dg(2, 3, 3) == doctest::Approx(0.0));
  CHECK(me.d2g(2, 2, 3, 3) == doctest::Approx(2.0 * 36.0).epsilon(1e-12));
}

TEST_CASE("parameter overrides") {
  const SpacetimeSpec spec = parse_spacetime(kSchwarzschildDoc);
  const Spacetime st(spec, {{"M", 2.0}});
  CHECK(st.parameters().at("M") == 2.0);
  const MetricEval me = st.metric({0.0, 6.0, M_PI / 2, 0.0}, 0);
  CHECK(me.g(0, 0) == doctest::Approx(1 - 4.0 / 6.0));
  CHECK_THROWS_AS(Spacetime(spec, {{"Q", 1.0}}), ValidationError);
}

TEST_CASE("torsion mirror and derivatives") {
  const Spacetime st{parse_spacetime(kTorsionDoc)};
  const Vec x{2.0, 0.1, 0.2, 0.3};
  const TorsionEval te = st.torsion(x);
  CHECK(te.T(1, 2, 3) == 0.3);
  CHECK(te.T(1, 3, 2) == -0.3);
  CHECK(te.T(2, 3, 1) == doctest::Approx(0.6));
  CHECK(te.T(2, 1, 3) == doctest::Approx(-0.6));
  CHECK(te.T(0, 1, 2) == 0.0);
  CHECK(te.dT(0, 2, 3, 1) == doctest::Approx(0.3));
  CHECK(te.dT(0, 2, 1, 3) == doctest::Approx(-0.3));
}

TEST_CASE("frame evaluation and orthonormality validation") {
  const char* doc = R"(
coordinates theta phi
signature ++
domain theta = (0.001, 3.141)
point 1.0471975511965976 0
g[theta,theta] = 1
g[phi,phi]     = sin(theta)^2
e[0,theta] = 1
e[1,phi]   = 1/sin(theta)
)";
  const Spacetime st{parse_spacetime(doc)};
  const Vec x{M_PI / 3, 0.0};
  const FrameEval fe = st.frame(x);
  CHECK(fe.L(0, 0) == 1.0);
  CHECK(fe.L(1, 1) == doctest::Approx(1.0 / std::sin(M_PI / 3)));
  CHECK(fe.L_inv(1, 1) == doctest::Approx(std::sin(M_PI / 3)));
  const double c = std::cos(M_PI / 3), s = std::sin(M_PI / 3);
  CHECK(fe.dL(0, 1, 1) == doctest::Approx(-c / (s * s)));
  CHECK(fe.d2L(0, 0, 1, 1) == doctest::Approx((1 + c * c) / (s * s * s)));

  // breaking orthonormality trips validation at the reference point
  std::string bad(doc);
  const auto pos = bad.find("e[0,theta] = 1");
  bad.replace(pos, 14, "e[0,theta] = 2");
  CHECK_THROWS_AS(Spacetime{parse_spacetime(bad)}, ValidationError);
}

TEST_CASE("signature validation") {
  const char* doc = R"(
coordinates t x
signature ++
point 0 0
g[t,t] = 1
g[x,x] = -1
)";
  CHECK_THROWS_AS(Spacetime{parse_spacetime(doc)}, ValidationError);
  const char* degenerate = R"(
coordinates t x
point 0 0
g[t,t] = 1
g[x,x] = x
)";
  CHECK_THROWS_AS(Spacetime{parse_spacetime(degenerate)}, ValidationError);
}

TEST_CASE("domain checks") {
  const Spacetime st(parse_spacetime(kSchwarzschildDoc));
  CHECK(st.in_domain({0, 6, 1.5, 0}));
  CHECK(!st.in_domain({0, 1.5, 1.5, 0}));
  CHECK_THROWS_AS(st.metric({0, 1.5, 1.5, 0}), ValidationError);
  CHECK_THROWS_AS(st.check_domain({0, 6, 1.5}), ValidationError);
}

TEST_CASE("tangent classification is scale invariant") {
  const Spacetime st(parse_spacetime(kSchwarzschildDoc));
  const Vec x{0.0, 6.0, M_PI / 2, 0.0};
  CHECK(classify_tangent(st, x, {1, 0, 0, 0}) == TangentClass::timelike);
  CHECK(classify_tangent(st, x, {0, 1, 0, 0}) == TangentClass::spacelike);
  CHECK(classify_tangent(st, x, {1e-9, 0, 0, 0}) == TangentClass::timelike);
  // radial null ray: g_tt u_t^2 + g_rr u_r^2 = 0
  const double ut = std::sqrt(1.5), ur = std::sqrt(2.0 / 3.0);
  CHECK(classify_tangent(st, x, {ut, ur, 0, 0}) == TangentClass::lightlike);
  CHECK(classify_tangent(st, x, {1e8 * ut, 1e8 * ur, 0, 0}) ==
        TangentClass::lightlike);
  CHECK_THROWS_AS(classify_tangent(st, x, {0, 0, 0, 0}), ValidationError);
  CHECK(to_string(TangentClass::lightlike) == std::string("lightlike"));
}
