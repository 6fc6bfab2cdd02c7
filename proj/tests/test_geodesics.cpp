#include <cmath>
#include <random>

#include "doctest.h"
#include "ltbm/errors.hpp"
#include "ltbm/geodesics.hpp"
#include "support.hpp"

using namespace ltbm;
using namespace ltbm::test;

namespace {

double sup(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

Vec random_timelike(std::mt19937_64& rng, const WeightedSpacetime& st, const Vec& x, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Mat g = st.metric(as_span(x));
  for (;;) {
    Vec v(st.dim());
    for (int i = 0; i < st.dim(); ++i) v[i] = u(rng);
    v[0] = std::abs(v[0]) + 0.2;
    if (v.dot(g * v) > 0.05 * v.squaredNorm()) return scale * v;
  }
}

}  // namespace

TEST_CASE("exp map examples") {
  const Vec o = vec({0, 0});
  CHECK(sup(exp_map(minkowski(2), {o, vec({1, 0.2})}, 1.0) - vec({1, 0.2})) < 1e-15);
  const Vec y = exp_map(warped2(), {o, vec({1, 0})}, 0.5);
  CHECK(sup(y - vec({0.5, 0})) < 1e-10);
  OdeSettings fine;
  fine.rtol = fine.atol = 1e-11;
  const Vec v = vec({0.8, 0.3});
  CHECK(sup(exp_map(warped2(), {o, v}, 1.0) - exp_map(warped2(), {o, v}, 1.0, fine)) < 1e-9);
  const Vec x = vec({0.3, -0.4});
  CHECK(exp_map(warped2(), {x, v}, 0.0) == x);
  try {
    exp_map(warped2(), {o, vec({5, 0})}, 1.0);
    FAIL("expected chart exit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LeftChart);
  }
}

TEST_CASE("geodesic invariants: residual and conserved lagrangian") {
  std::mt19937_64 rng(1);
  const auto st = warped2();
  std::vector<double> times;
  for (int k = 0; k <= 64; ++k) times.push_back(k / 64.0);
  for (int s = 0; s < 20; ++s) {
    const Vec x = vec({0.2, 0.1});
    const Vec v = random_timelike(rng, st, x, 0.8);
    const GeodesicSolution sol = solve_geodesic(st, {x, v}, times);
    const double L0 = v.dot(st.metric(as_span(x)) * v);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double L = sol.v[k].dot(st.metric(as_span(sol.x[k])) * sol.v[k]);
      REQUIRE(std::abs(L - L0) <= 1e-8 * (1 + std::abs(L0)));
    }
    CHECK(geodesic_residual(st, sol) < 1e-3);
  }
}

TEST_CASE("log map") {
  const auto mk = minkowski(2);
  const Vec x = vec({0.1, 0.2}), y = vec({1.5, -0.3});
  CHECK(log_map(mk, x, y) == y - x);
  CHECK(log_map(warped2(), x, x).isZero(0.0));
  std::mt19937_64 rng(4);
  const auto st = warped2();
  for (int s = 0; s < 100; ++s) {
    const Vec v = random_timelike(rng, st, x, 0.7);
    const Vec target = exp_map(st, {x, v}, 1.0);
    const Vec back = log_map(st, x, target);
    REQUIRE(sup(back - v) < 1e-7);
    CHECK(sup(exp_map(st, {x, back}, 1.0) - target) < 1e-8);
  }
}

TEST_CASE("log map reports ambiguity and failure") {
  // Anti-de Sitter strip: timelike geodesics from the origin refocus at t = pi.
  const auto ads = make_spacetime(2, {"cosh(x1)^2", "0", "-1"}, "0", 2, -6, 6);
  const Vec o = vec({0, 0});
  LogOptions opts;
  opts.extra_starts = 8;
  // well inside the first focusing time a single geodesic exists
  const Vec v = log_map(ads, o, vec({1.0, 0.2}), opts);
  CHECK(sup(exp_map(ads, {o, v}, 1.0) - vec({1.0, 0.2})) < 1e-8);
  bool raised = false;
  try {
    log_map(ads, o, vec({M_PI, 0.0}), opts);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::AmbiguousGeodesic;
  }
  CHECK(raised);
}

TEST_CASE("interpolation map") {
  const auto mk = minkowski(3);
  const Vec x = vec({0, 0.1, 0.2}), y = vec({1, 0.5, -0.2});
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(sup(interpolate_F(mk, x, y, t) - ((1 - t) * x + t * y)) < 1e-15);
  }
  const auto st = warped2();
  const Vec a = vec({0.0, 0.0}), b = vec({0.6, 0.2});
  CHECK(interpolate_F(st, a, b, 0.0) == a);
  CHECK(interpolate_F(st, a, b, 1.0) == b);
  // F_t(x, exp_x(w)) = exp_x(t w)
  const Vec w = vec({0.5, 0.1});
  const Vec end = exp_map(st, {a, w}, 1.0);
  CHECK(sup(interpolate_F(st, a, end, 0.4) - exp_map(st, {a, 0.4 * w}, 1.0)) < 1e-7);
}

TEST_CASE("time separation") {
  const auto mk = minkowski(2);
  const Vec o = vec({0, 0});
  const auto one = time_separation(mk, o, vec({1, 0}));
  CHECK(!one.minus_infinity);
  CHECK(one.value == 1.0);
  const auto s3 = time_separation(mk, o, vec({2, 1}));
  CHECK(std::abs(s3.value - std::sqrt(3.0)) < 1e-8);
  const auto sp = time_separation(mk, o, vec({0, 1}));
  CHECK(sp.minus_infinity);
  CHECK(sp.positive_part() == 0.0);
  const auto null = time_separation(mk, o, vec({1, 1}));
  CHECK(!null.minus_infinity);
  CHECK(null.value == 0.0);
  // reversed timelike pairs are not causally related
  std::mt19937_64 rng(8);
  const auto st = warped2();
  for (int k = 0; k < 20; ++k) {
    const Vec x = vec({-0.2, 0.1});
    const Vec y = exp_map(st, {x, random_timelike(rng, st, x, 0.6)}, 1.0);
    const auto fwd = time_separation(st, x, y);
    REQUIRE(!fwd.minus_infinity);
    CHECK(fwd.value > 0.0);
    const Vec v = log_map(st, x, y);
    CHECK(fwd.value == std::sqrt(v.dot(st.metric(as_span(x)) * v)));
    CHECK(time_separation(st, y, x).minus_infinity);
  }
}
