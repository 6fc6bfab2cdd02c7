// Acceptance checks, one line per criterion:
//   criterion <k> PASS|FAIL <name> [<seconds> s, limit <seconds> s] <measurements>
// Usage: acceptance [k ...]; no arguments runs all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ltbm/config.hpp"
#include "ltbm/coupling.hpp"
#include "ltbm/distortion.hpp"
#include "ltbm/errors.hpp"
#include "ltbm/geodesics.hpp"
#include "ltbm/jacobi.hpp"
#include "ltbm/regions.hpp"
#include "ltbm/tbm.hpp"

using namespace ltbm;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

WeightedSpacetime catalog(const std::string& name, const std::string& extra = "") {
  return parse_config("[spacetime]\ncatalog = " + name + "\n" + extra).st;
}

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// ------------------------------------------------------------------ 1

void flat_consistency(Outcome& o) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double ric = 0.0, trip = 0.0;
  for (int n : {2, 3}) {
    const auto st = catalog("minkowski" + std::to_string(n));
    for (int k = 0; k < 100; ++k) {
      Vec x(n), v(n);
      for (int a = 0; a < n; ++a) x[a] = 2.0 * u(rng);
      ric = std::max(ric, ricci(st, as_span(x)).cwiseAbs().maxCoeff());
      for (int a = 1; a < n; ++a) v[a] = 0.5 * u(rng);
      v[0] = std::sqrt(v.tail(n - 1).squaredNorm() + 0.05) * (1.0 + std::abs(u(rng)));
      const Vec y = exp_map(st, TangentPoint{x, v}, 1.0);
      trip = std::max(trip, (log_map(st, x, y) - v).cwiseAbs().maxCoeff());
    }
  }
  const auto m2 = catalog("minkowski2"), m3 = catalog("minkowski3");
  const double l2 = time_separation(m2, vec({0, 0}), vec({2, 1})).value;
  const double l3 = time_separation(m3, vec({0, 0, 0}), vec({2, 1, 0})).value;
  o.detail << "max|Ric|=" << g(ric) << " roundtrip=" << g(trip) << " l=" << g(l2) << " err=" << g(std::abs(l2 - std::sqrt(3.0)));
  o.require(ric <= 1e-8, "Ric");
  o.require(trip <= 1e-7, "round trip");
  o.require(std::abs(l2 - std::sqrt(3.0)) <= 1e-8 && std::abs(l3 - std::sqrt(3.0)) <= 1e-8, "separation");

  // G_t of translated congruent cubes
  const double delta = 0.1;
  for (int n : {2, 3}) {
    const auto& st = n == 2 ? m2 : m3;
    Vec x0 = Vec::Zero(n), v0 = Vec::Unit(n, 0), shift = Vec::Zero(n);
    shift[0] = 1.0;
    shift[1] = 0.2;
    const RegionSpec A = eigen_cube(st, x0, v0, delta);
    const RegionSpec B = map_region(A, [shift](const Vec& p) { return Vec(p + shift); }, "A + shift");
    PipelineOptions opts;
    // flat cubes map affinely; 0.4-voxel matched spacing still hits every half-side cell
    if (n == 3) opts.matched_resolution = 161;
    const double h = delta / 64;
    for (double t : {0.25, 0.5}) {
      const RegionSpec G = interpolant_region(st, A, B, t, opts.counts(n, h));
      const double m = measure(st, G, h).value, cube = std::pow(delta, n);
      const double rel = std::abs(m - cube) / cube;
      o.detail << " G" << n << "(t=" << t << ")rel=" << g(rel);
      o.require(rel <= 1e-3, "G_t volume n=" + std::to_string(n));
    }
  }
}

// ------------------------------------------------------------------ 2

void distortion_suite(Outcome& o) {
  double bvp = 0.0;
  const int m = 2001;
  const double h = 1.0 / (m - 1);
  for (double k : {-4.0, -1.0, 0.5, 1.0, 2.0})
    for (double th : {0.3, 1.0, 2.0, 2.9}) {
      if (k * th * th >= 0.9 * kPi * kPi) continue;
      std::vector<double> s;
      for (int i = 0; i < m; ++i) s.push_back(sigma(k, i * h, th).value);
      for (int i = 1; i + 1 < m; ++i) {
        const double r = (s[i + 1] - 2 * s[i] + s[i - 1]) / (h * h) + k * th * th * s[i];
        bvp = std::max(bvp, std::abs(r) / (1 + std::abs(k) * th * th));
      }
    }
  double ratio = std::numeric_limits<double>::infinity();
  for (double k : {-2.0, 1.0, 3.0})
    for (double t : {0.25, 0.5, 0.8}) {
      auto err = [&](double th) {
        return std::abs(sigma(k, t, th).value - t - t * (1 - t) * (1 + t) * (k / 6) * th * th);
      };
      ratio = std::min({ratio, err(0.4) / err(0.2), err(0.2) / err(0.1)});
    }
  int violations = 0, points = 0;
  for (int a = 0; a < 10; ++a)
    for (int b = 0; b < 10; ++b)
      for (int c = 0; c < 10; ++c)
        for (int d = 0; d < 10; ++d) {
          const double K = -5.0 + a * (10.0 / 9), N = 1.1 + b * 0.9, t = c / 9.0, th = 0.05 + d * 0.35;
          ++points;
          const ExtendedReal s = sigma(K / N, t, th), u = tau(K, N, t, th);
          if (u.infinite) continue;
          if (s.infinite || s.value > u.value + tolerance_band(u.value)) ++violations;
        }

  // generated functions with a known sign of f'' + k f
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int want_convex = 25, want_non = 25, disagreements = 0, generated = 0;
  while (want_convex + want_non > 0) {
    const double k = 2.0 * u(rng), L = 1.0 + 0.5 * u(rng);
    if (k * L * L >= 0.8 * kPi * kPi) continue;
    const double al = u(rng), be = u(rng), ga = 2.0 * u(rng), om = 2.0 + 2.0 * u(rng), c0 = 2.0 + u(rng);
    const auto f = [&](double t) { return c0 + std::exp(al * t) + be * std::cos(om * t) + ga * t * t; };
    const auto f2 = [&](double t) { return al * al * std::exp(al * t) - be * om * om * std::cos(om * t) + 2 * ga; };
    double truth = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 4000; ++i) {
      const double t = L * i / 4000.0;
      truth = std::min(truth, f2(t) + k * f(t));
    }
    if (std::abs(truth) < 0.3) continue;  // keep the labels unambiguous
    const bool convex = truth > 0;
    if ((convex && want_convex == 0) || (!convex && want_non == 0)) continue;
    (convex ? want_convex : want_non)--;
    ++generated;
    std::vector<double> s(128);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(L * static_cast<double>(i) / 127.0);
    const ConvexityCheck c = check_convexity_equivalence(s, 0.0, L, k);
    disagreements += (c.ode_holds != c.sigma_holds) || (c.ode_holds != convex);
  }
  o.detail << "bvp=" << g(bvp) << " order4_ratio=" << g(ratio) << " tau_grid=" << points << " violations=" << violations
           << " functions=" << generated << " disagreements=" << disagreements;
  o.require(bvp <= 1e-6, "sigma residual");
  o.require(ratio >= 15.0, "expansion order");
  o.require(points == 10000 && violations == 0, "tau >= sigma");
  o.require(generated == 50 && disagreements == 0, "convexity equivalence");
}

// ------------------------------------------------------------------ 3

void jacobi_suite(Outcome& o) {
  const auto st = catalog("warped2");
  const Vec x0 = vec({0, 0});
  double df_ratio = std::numeric_limits<double>::infinity();
  for (const Vec& v : {vec({1, 0}), vec({std::cosh(0.4), std::sinh(0.4)})}) {
    double prev = df_taylor_check(st, x0, v, 0.2, 0.5).error;
    for (double lam : {0.1, 0.05}) {
      const double e = df_taylor_check(st, x0, v, lam, 0.5).error;
      df_ratio = std::min(df_ratio, prev / e);
      prev = e;
    }
  }
  VectorField f{[](const Vec& y) { return vec({1.0 + 0.3 * y[1], 0.2 * y[0] - 0.1 * y[1]}); }, {}};
  double dt_ratio = std::numeric_limits<double>::infinity();
  double prev = transport_derivative(st, x0, f, 0.2).model_error;
  for (double lam : {0.1, 0.05}) {
    const double e = transport_derivative(st, x0, f, lam).model_error;
    dt_ratio = std::min(dt_ratio, prev / e);
    prev = e;
  }
  Mat md0(2, 2);
  md0 << 0.4, 0.2, -0.1, 0.3;
  std::vector<double> grid;
  for (int i = 0; i <= 64; ++i) grid.push_back(i / 64.0);
  const JacobiState js =
      riccati_state(propagate_jacobi(st, {vec({-0.2, 0.1}), vec({1, 0.3})}, Mat::Identity(2, 2), md0, grid));
  double trace = 0.0;
  const double h = 1.0 / 64;
  for (std::size_t k = 2; k + 2 < grid.size(); ++k) {
    auto det = [&](std::size_t i) { return js.M[i].determinant(); };
    const double d = (-det(k + 2) + 8 * det(k + 1) - 8 * det(k - 1) + det(k - 2)) / (12 * h);
    trace = std::max(trace, std::abs(d - det(k) * js.L[k].trace()) / std::abs(det(k) * js.L[k].trace()));
  }
  o.detail << "DF_t_ratio=" << g(df_ratio) << " DT_ratio=" << g(dt_ratio) << " trace_rel=" << g(trace);
  o.require(df_ratio >= 7.0, "DF_t order");
  o.require(dt_ratio >= 7.0, "DT order");
  o.require(trace <= 1e-6, "trace identity");
}

// ------------------------------------------------------------------ 4

void distortion_ode_realization(Outcome& o) {
  const auto st = catalog("weighted_minkowski2", "weight_slope = 1\nN = 3\n");
  const TransportField tf = build_transport_field(st, vec({0, 0}), vec({1, 0}));
  const double be = bakry_emery_ricci(st, as_span(tf.x0), tf.v0);
  o.detail << "be_ricci=" << g(be);
  o.require(std::abs(be + 1.0) <= 1e-6, "Bakry-Emery-Ricci");
  double prev = std::numeric_limits<double>::infinity();
  for (double lam : {0.1, 0.05, 0.025}) {
    const DistortionOdeReport r = check_distortion_ode(st, tf, lam, 0.0, 0.4);
    o.detail << " lambda=" << lam << ":min_res=" << g(r.min_residual) << ",sup|E|=" << g(r.sup_error_term);
    o.require(r.holds, "ODE at lambda " + g(lam));
    o.require(r.sup_error_term < prev, "sup|E| decreasing");
    prev = r.sup_error_term;
  }
}

// ------------------------------------------------------------------ 5

void counterexample_realization(Outcome& o) {
  const auto wm = catalog("weighted_minkowski2", "weight_slope = 1\nN = 3\n");
  const CounterexampleReport r = find_counterexample(wm, 0.0, SearchBox{}, 0.4);
  o.detail << "state=" << to_string(r.state);
  o.require(r.state == CounterexampleReport::State::Certified && r.result.has_value(), "certified violation");
  if (r.result) {
    const TbmCheckResult& c = *r.result;
    bool on_grid = false;
    for (int j = 0; j <= 4; ++j) on_grid |= r.lambda == 0.2 * std::ldexp(1.0, -j);
    o.detail << " lambda=" << g(r.lambda) << " delta=" << g(r.delta) << " t=" << c.t << " lhs=" << g(c.lhs)
             << " rhs=" << g(c.rhs) << " uncertainty=" << g(c.uncertainty) << " tolerance=" << g(c.tolerance);
    o.require(on_grid && r.delta == r.lambda * r.lambda * r.lambda && c.t == 0.5, "parameters");
    o.require(c.lhs + c.uncertainty < c.rhs - c.tolerance, "margin beyond uncertainty");
  }
  const CounterexampleReport none = find_counterexample(catalog("minkowski2"), 0.0, SearchBox{}, 0.4);
  o.detail << " control=" << to_string(none.state);
  o.require(none.state == CounterexampleReport::State::None, "negative control");
}

// ------------------------------------------------------------------ 6

void optimal_vs_geodesic(Outcome& o) {
  const auto st = catalog("warped2");
  const TransportField tf = build_transport_field(st, vec({0.1, 0}), vec({1, 0}));
  const double delta = 0.05;
  PipelineOptions opts;
  opts.voxel_fraction = 1.0 / 16;
  opts.random_pairs = 1024;
  opts.containment_points = 500;
  const std::vector<double> lambdas = {0.4, 0.2, 0.1};
  std::vector<double> gaps;
  double C = 0.0;
  std::size_t checked = 0;
  for (double lam : lambdas) {
    const OptimalGeodesicReport r = compare_optimal_geodesic(st, tf, lam, delta, 0.5, opts);
    gaps.push_back(r.gap);
    C = std::max(C, r.C);
    checked += r.checked;
    o.detail << " lambda=" << lam << ":gap=" << g(r.gap) << ",refine=" << g(r.refinement) << ",ratio=" << g(r.ratio);
    o.require(r.failures == 0 && r.fatten_missing == 0, "pipeline containment");
  }
  // fresh pairs, independent of the pipeline's samples, against the fitted rho
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t fresh = 0, outside = 0;
  for (double lam : lambdas) {
    const RegionSpec A = eigen_cube(st, tf.x0, tf.v0, delta);
    const RegionSpec T = map_region(A, [&](const Vec& x) { return transport_map(st, tf, x, 0.5 * lam); }, "T");
    const double rho = C * (delta + lam * lam * lam);
    for (int k = 0; k < 150; ++k) {
      const Vec x = A.param(vec({u(rng), u(rng)}));
      const Vec y = transport_map(st, tf, A.param(vec({u(rng), u(rng)})), lam);
      if (time_separation(st, x, y).minus_infinity) continue;
      ++fresh;
      outside += distance_to_region(T, interpolate_F(st, x, y, 0.5)) > delta * rho * (1 + 1e-9);
    }
  }
  const double slope = loglog_slope(lambdas, gaps);
  o.detail << " C=" << g(C) << " checked=" << checked << " fresh=" << fresh << " outside=" << outside
           << " gap_exponent=" << g(slope);
  o.require(outside == 0, "containment of fresh points");
  o.require(slope >= 2.5, "gap exponent >= 2.5");
}

// ------------------------------------------------------------------ 7

void brute(const Eigen::MatrixXd& ell, double q, int i, std::vector<char>& used, double acc, double& best) {
  const int m = static_cast<int>(ell.rows());
  if (i == m) {
    best = std::max(best, acc);
    return;
  }
  for (int j = 0; j < m; ++j) {
    if (used[static_cast<std::size_t>(j)] || !(ell(i, j) > 0.0)) continue;
    used[static_cast<std::size_t>(j)] = 1;
    brute(ell, q, i + 1, used, acc + std::pow(ell(i, j), q), best);
    used[static_cast<std::size_t>(j)] = 0;
  }
}

void coupling_oracle(Outcome& o) {
  const auto st = catalog("minkowski2");
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-1.0, 1.0), uq(0.05, 0.95);
  int mismatches = 0, infinite = 0;
  for (int k = 0; k < 200; ++k) {
    const int m = 1 + k % 6;
    // every fifth instance puts nu beside mu, so all pairs are spacelike
    const double lift = k % 5 == 0 ? 0.0 : (k % 3 == 0 ? 0.4 : 1.5);
    std::vector<Vec> mu, nu;
    for (int i = 0; i < m; ++i) {
      mu.push_back(vec({0.2 * u(rng), u(rng)}));
      nu.push_back(lift == 0.0 ? vec({0.2 * u(rng), 3.0 + 0.5 * u(rng)}) : vec({lift + 0.5 * u(rng), u(rng)}));
    }
    const double q = uq(rng);
    const CouplingProblem cp = lw_distance_discrete(st, mu, nu, q);
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    double best = -std::numeric_limits<double>::infinity();
    brute(cp.ell, q, 0, used, 0.0, best);
    if (!std::isfinite(best)) {
      ++infinite;
      mismatches += !cp.minus_infinity;
    } else {
      mismatches += cp.minus_infinity || cp.objective != best ||
                    cp.value != std::pow(best / m, 1.0 / q);
    }
  }
  o.detail << "instances=200 mismatches=" << mismatches << " minus_infinity_cases=" << infinite;
  o.require(mismatches == 0, "exact agreement");
  o.require(infinite > 0, "-inf cases present");
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "flat consistency", 30, flat_consistency},
      {2, "distortion suite", 10, distortion_suite},
      {3, "jacobi/taylor suite", 60, jacobi_suite},
      {4, "distortion ODE realization", 60, distortion_ode_realization},
      {5, "counterexample realization", 900, counterexample_realization},
      {6, "optimal vs geodesic comparison", 300, optimal_vs_geodesic},
      {7, "coupling oracle", 10, coupling_oracle},
  };
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));
  bool ok = true;
  for (const auto& c : all) {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const Error& e) {
      o.pass = false;
      o.detail << " error " << error_code_name(e.code()) << ": " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit) {
      o.pass = false;
      o.detail << " FAILED[runtime]";
    }
    std::printf("criterion %d %s %s [%.1f s, limit %.0f s]%s%s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs,
                c.limit, o.detail.str().empty() || o.detail.str()[0] == ' ' ? "" : " ", o.detail.str().c_str());
    std::fflush(stdout);
    ok &= o.pass;
  }
  return ok ? 0 : 1;
}
