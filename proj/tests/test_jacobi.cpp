#include <cmath>
#include <random>

#include "doctest.h"
#include "ltbm/errors.hpp"
#include "ltbm/jacobi.hpp"
#include "support.hpp"

using namespace ltbm;
using namespace ltbm::test;

namespace {

double sup(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> uniform_grid(int k, double end = 1.0) {
  std::vector<double> t;
  for (int i = 0; i <= k; ++i) t.push_back(end * i / k);
  return t;
}

VectorField affine_field(const Vec& v0, const Vec& x0, double alpha) {
  return {[=](const Vec& y) { return Vec(v0 + alpha * (y - x0)); }, {}};
}

}  // namespace

TEST_CASE("tidal operator") {
  const auto mk = minkowski(3);
  const auto op = tidal_operator(mk, vec({0, 0, 0}), vec({1, 0.2, 0.1}));
  CHECK(sup(op.matrix) == 0.0);
  CHECK(op.eigenvalues.cwiseAbs().maxCoeff() == 0.0);

  const auto w = tidal_operator(warped2(), vec({0.3, 0.1}), vec({1, 0}));
  CHECK(std::abs(w.eigenvalues[0]) < 1e-12);
  CHECK(std::abs(w.eigenvalues[1] + 1.0) < 1e-5);
  // v is in the kernel
  CHECK((w.matrix * Vec::Unit(2, 0)).cwiseAbs().maxCoeff() < 1e-9);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const std::vector<WeightedSpacetime> sts{
      warped2(), make_spacetime(3, {"1", "0", "0", "-exp(2*x0)", "0", "-cosh(x0)^2"}, "0", 3, -1, 1)};
  for (const auto& st : sts) {
    for (int k = 0; k < 20; ++k) {
      Vec x = Vec::Zero(st.dim()), v(st.dim());
      for (int i = 0; i < st.dim(); ++i) {
        x[i] = u(rng);
        v[i] = u(rng);
      }
      v[0] = 1.0;
      const auto t = tidal_operator(st, x, v);
      CHECK(std::abs(t.matrix.trace() - v.dot(ricci(st, as_span(x)) * v)) < 1e-4);
    }
  }
}

TEST_CASE("jacobi propagation") {
  const auto mk = minkowski(2);
  Mat dv(2, 2);
  dv << 0.3, -0.1, 0.2, 0.5;
  const auto grid = uniform_grid(8);
  const auto js = propagate_jacobi(mk, {vec({0, 0}), vec({1, 0.1})}, Mat::Identity(2, 2), dv, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(sup(js.M[k] - (Mat::Identity(2, 2) + grid[k] * dv)) < 1e-15);
  }
  const auto st = warped2();
  const auto g2 = uniform_grid(32);
  const Vec x = vec({-0.5, 0.2});
  const auto c = propagate_jacobi(st, {x, vec({1, 0})}, Mat::Identity(2, 2), Mat::Zero(2, 2), g2);
  CHECK(c.M[0] == Mat::Identity(2, 2));
  const auto s = propagate_jacobi(st, {x, vec({1, 0})}, Mat::Zero(2, 2), Mat::Identity(2, 2), g2);
  for (std::size_t k = 0; k < g2.size(); ++k) {
    const double t = g2[k];
    CHECK(std::abs(c.M[k](1, 1) - std::cosh(t)) < 1e-6);
    CHECK(std::abs(c.M[k](0, 0) - 1.0) < 1e-6);
    CHECK(std::abs(s.M[k](1, 1) - std::sinh(t)) < 1e-6);
    CHECK(std::abs(s.M[k](0, 0) - t) < 1e-6);
    CHECK(std::abs(s.M[k](0, 1)) < 1e-6);
    // parallel frame: e1 = e^{-t} d/dx
    CHECK(std::abs(c.frame[k](1, 1) - std::exp(-(x[0] + t))) < 1e-8);
  }
  CHECK(jacobi_residual(s) < 1e-3);
}

TEST_CASE("riccati states") {
  const auto mk = minkowski(2);
  const double alpha = 0.7;
  const auto grid = uniform_grid(10);
  const auto js = riccati_state(
      propagate_jacobi(mk, {vec({0, 0}), vec({1, 0})}, Mat::Identity(2, 2), alpha * Mat::Identity(2, 2), grid));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(sup(js.L[k] - alpha / (1 + alpha * grid[k]) * Mat::Identity(2, 2)) < 1e-14);
  }
  Mat m0(2, 2), md0(2, 2);
  m0 << 2, 0.1, 0, 1;
  md0 << 0.2, 0.3, -0.1, 0.4;
  const auto w = riccati_state(propagate_jacobi(warped2(), {vec({0, 0}), vec({1, 0.2})}, m0, md0, uniform_grid(4)));
  CHECK(sup(w.L[0] - md0 * m0.inverse()) < 1e-14);
  try {
    riccati_state(propagate_jacobi(mk, {vec({0, 0}), vec({1, 0})}, Mat::Identity(2, 2), -Mat::Identity(2, 2), grid));
    FAIL("expected singular M");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularM);
  }
}

TEST_CASE("riccati agrees with an independent riccati integration") {
  // Along d/dt in the warped metric the frame tidal matrix is diag(0, -1).
  const auto st = warped2();
  Mat md0(2, 2);
  md0 << 0.2, 0.1, 0.1, -0.3;
  const auto grid = uniform_grid(16);
  const auto js = riccati_state(propagate_jacobi(st, {vec({0, 0}), vec({1, 0})}, Mat::Identity(2, 2), md0, grid));
  Mat R = Mat::Zero(2, 2);
  R(1, 1) = -1.0;
  OdeRhs rhs = [&](double, const OdeState& y, OdeState& dy) {
    const Eigen::Map<const Eigen::Matrix2d> L(y.data());
    const Eigen::Matrix2d d = -R - L * L;
    dy = Eigen::Map<const Eigen::VectorXd>(d.data(), 4);
  };
  OdeState y0 = Eigen::Map<const Eigen::VectorXd>(md0.data(), 4);
  OdeSettings fine;
  fine.rtol = fine.atol = 1e-12;
  const auto states = integrate(rhs, 0.0, y0, grid, fine);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Eigen::Map<const Eigen::Matrix2d> L(states[k].data());
    CHECK(sup(js.L[k] - Mat(L)) < 1e-8);
  }
}

TEST_CASE("trace identity d/dt det M = det M tr L") {
  const auto st = warped2();
  Mat md0(2, 2);
  md0 << 0.4, 0.2, -0.1, 0.3;
  const double h = 1.0 / 64;
  const auto grid = uniform_grid(64);
  const auto js = riccati_state(propagate_jacobi(st, {vec({-0.2, 0.1}), vec({1, 0.3})}, Mat::Identity(2, 2), md0, grid));
  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < grid.size(); ++k) {
    auto det = [&](std::size_t i) { return js.M[i].determinant(); };
    const double d = (-det(k + 2) + 8 * det(k + 1) - 8 * det(k - 1) + det(k - 2)) / (12 * h);
    const double rhs = det(k) * js.L[k].trace();
    worst = std::max(worst, std::abs(d - rhs) / std::abs(rhs));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("boundary jacobi") {
  const auto mk = minkowski(2);
  const std::vector<double> ts{0.0, 0.3, 0.5, 1.0};
  const auto bj = boundary_jacobi(mk, vec({0, 0}), vec({1, 0.3}), ts);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    CHECK(sup(bj.P[k] - (1 - ts[k]) * Mat::Identity(2, 2)) < 1e-14);
    CHECK(sup(bj.Q[k] - ts[k] * Mat::Identity(2, 2)) < 1e-14);
    const Vec u = vec({0.3, -0.7});
    CHECK(sup(Mat(bj.P[k] * u + bj.Q[k] * u - u)) < 1e-14);
  }
  const auto ads = make_spacetime(2, {"cosh(x1)^2", "0", "-1"}, "0", 2, -6, 6);
  try {
    boundary_jacobi(ads, vec({0, 0}), vec({M_PI, 0}), ts);
    FAIL("expected conjugate points");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConjugatePoints);
  }
}

TEST_CASE("second-order expansion of DF_t") {
  const Vec x0 = vec({0, 0});
  const Vec v0 = vec({1, 0});
  for (double lam : {0.2, 0.1, 0.05}) {
    CHECK(df_taylor_check(minkowski(2), x0, v0, lam, 0.4).error < 1e-9);
    for (double t : {0.0, 1.0}) CHECK(df_taylor_check(warped2(), x0, v0, lam, t).error < 1e-9);
  }
  for (const Vec& v : {vec({1, 0}), vec({std::cosh(0.4), std::sinh(0.4)})}) {
    double prev = df_taylor_check(warped2(), x0, v, 0.2, 0.5).error;
    for (double lam : {0.1, 0.05}) {
      const double e = df_taylor_check(warped2(), x0, v, lam, 0.5).error;
      CHECK(prev / e >= 7.0);
      prev = e;
    }
  }
}

TEST_CASE("transport derivative") {
  const auto mk = minkowski(2);
  const Vec x0 = vec({0, 0});
  CHECK(sup(transport_derivative(mk, x0, affine_field(vec({1, 0.2}), x0, 0.0), 0.3).exact - Mat::Identity(2, 2)) < 1e-12);
  const double alpha = -0.6, lam = 0.25;
  const auto td = transport_derivative(mk, x0, affine_field(vec({1, 0}), x0, alpha), lam);
  CHECK(sup(td.exact - (1 + alpha * lam) * Mat::Identity(2, 2)) < 1e-9);

  const auto st = warped2();
  VectorField f{[](const Vec& y) { return vec({1.0 + 0.3 * y[1], 0.2 * y[0] - 0.1 * y[1]}); }, {}};
  double prev = transport_derivative(st, x0, f, 0.2).model_error;
  for (double l : {0.1, 0.05}) {
    const double e = transport_derivative(st, x0, f, l).model_error;
    CHECK(prev / e >= 7.0);
    prev = e;
  }
  // coordinate form against finite differences of y -> exp_y(lambda V(y))
  const double l = 0.3, h = 1e-4;
  const Mat coord = transport_derivative(st, x0, f, l).coordinate;
  Mat fd(2, 2);
  for (int j = 0; j < 2; ++j) {
    Vec p = x0, m = x0;
    p[j] += h;
    m[j] -= h;
    fd.col(j) = (exp_map(st, {p, l * f.value(p)}, 1.0) - exp_map(st, {m, l * f.value(m)}, 1.0)) / (2 * h);
  }
  CHECK(sup(coord - fd) < 1e-6);
}

TEST_CASE("volume distortion") {
  const auto mk = minkowski(2);
  const Vec x0 = vec({0, 0});
  const auto grid = uniform_grid(10);
  const auto flat = volume_distortion(mk, x0, affine_field(vec({1, 0.1}), x0, 0.0), 0.5, grid);
  for (double d : flat.D) CHECK(d == doctest::Approx(1.0).epsilon(1e-14));
  const double alpha = 0.8, lam = 0.3, N = 2.0;
  const auto lin = volume_distortion(mk, x0, affine_field(vec({1, 0}), x0, alpha), lam, grid);
  CHECK(lin.D[0] == 1.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(lin.D[k] - std::pow(1 + alpha * lam * grid[k], 2.0 / N)) < 1e-12);
  }
  try {
    volume_distortion(mk, x0, affine_field(vec({1, 0}), x0, -2.0), 1.0, grid);
    FAIL("expected singular M");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularM);
  }
}
