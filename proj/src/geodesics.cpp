#include "ltbm/geodesics.hpp"

#include <algorithm>
#include <cmath>

#include "ltbm/errors.hpp"
#include "ltbm/jacobi.hpp"

namespace ltbm {

namespace {

void require_inside(const WeightedSpacetime& st, std::span<const double> x, double margin) {
  if (st.chart().margin(x) < margin) fail(ErrorCode::LeftChart, "geodesic left the chart domain");
}

double sup_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

GeodesicSolution solve_geodesic(const WeightedSpacetime& st, const TangentPoint& tp,
                                std::span<const double> times, const OdeSettings& ode) {
  const int n = st.dim();
  GeodesicSolution sol;
  sol.t.assign(times.begin(), times.end());
  require_inside(st, as_span(tp.x), 0.0);
  if (st.is_flat()) {
    for (double t : times) {
      Vec x = tp.x + t * tp.v;
      require_inside(st, as_span(x), 0.0);
      sol.x.push_back(x);
      sol.v.push_back(tp.v);
    }
    return sol;
  }
  const double margin = 2.0 * st.first_step();
  OdeRhs rhs = [&](double, const OdeState& y, OdeState& dy) {
    const Vec x = y.head(n);
    const Vec u = y.tail(n);
    require_inside(st, as_span(x), margin);
    const Christoffels gam = christoffels_from_jet(metric_jet(st, as_span(x), false), n);
    dy.resize(2 * n);
    dy.head(n) = u;
    dy.tail(n) = -gam.contract(u, u);
  };
  OdeState y0(2 * n);
  y0 << tp.x, tp.v;
  const auto states = integrate(rhs, 0.0, y0, times, ode);
  for (const auto& s : states) {
    sol.x.push_back(s.head(n));
    sol.v.push_back(s.tail(n));
  }
  return sol;
}

Vec exp_map(const WeightedSpacetime& st, const TangentPoint& tp, double t, const OdeSettings& ode) {
  if (t == 0.0) return tp.x;
  const double times[] = {t};
  return solve_geodesic(st, tp, times, ode).x.front();
}

namespace {

struct ShotResult {
  bool converged = false;
  Vec v;
  double residual = 0.0;
};

ShotResult shoot(const WeightedSpacetime& st, const Vec& x, const Vec& y, Vec v, const LogOptions& opts) {
  const int n = st.dim();
  const Mat zero = Mat::Zero(n, n);
  const Mat id = Mat::Identity(n, n);
  const double times[] = {0.0, 1.0};

  auto evaluate = [&](const Vec& w, Vec& residual, Mat* jac) {
    const JacobiState js = propagate_jacobi(st, TangentPoint{x, w}, zero, id, times, nullptr, opts.ode);
    residual = js.x[1] - y;
    if (jac) *jac = js.frame[1] * js.M[1] * frame_inverse(js.frame[0], st.metric(as_span(x)));
  };

  ShotResult out;
  Vec r;
  Mat jac;
  try {
    evaluate(v, r, &jac);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::LeftChart || e.code() == ErrorCode::StepFailure || e.code() == ErrorCode::Domain)
      return out;
    throw;
  }
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double res = sup_norm(r);
    if (res <= opts.tolerance) {
      out.converged = true;
      break;
    }
    const Eigen::FullPivLU<Mat> lu(jac);
    if (!lu.isInvertible()) break;
    const Vec step = lu.solve(r);
    // Backtracking: accept the first step fraction that reduces the residual.
    double frac = 1.0;
    bool accepted = false;
    for (int k = 0; k < 12 && !accepted; ++k, frac *= 0.5) {
      const Vec trial = v - frac * step;
      Vec rt;
      Mat jt;
      try {
        evaluate(trial, rt, &jt);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::LeftChart || e.code() == ErrorCode::StepFailure ||
            e.code() == ErrorCode::Domain)
          continue;
        throw;
      }
      if (sup_norm(rt) < res || sup_norm(rt) <= opts.tolerance) {
        v = trial;
        r = rt;
        jac = jt;
        accepted = true;
      }
    }
    if (!accepted) {
      // Stagnation at the integrator's noise floor still counts when small.
      out.converged = res <= 1e-8;
      break;
    }
    if (sup_norm(frac * 2.0 * step) <= 1e-14 * (1.0 + sup_norm(v)) && sup_norm(r) <= 1e-8) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged && sup_norm(r) <= opts.tolerance) out.converged = true;
  out.v = v;
  out.residual = sup_norm(r);
  return out;
}

}  // namespace

Vec log_map(const WeightedSpacetime& st, const Vec& x, const Vec& y, const LogOptions& opts) {
  require_inside(st, as_span(x), 0.0);
  require_inside(st, as_span(y), 0.0);
  if (x == y) return Vec::Zero(st.dim());
  if (st.is_flat()) return y - x;

  const Vec start = y - x;
  ShotResult best = shoot(st, x, y, start, opts);
  if (!best.converged) {
    fail(ErrorCode::NoConvergence,
         "geodesic shooting did not converge (residual " + std::to_string(best.residual) + ")");
  }
  const double scale = std::max(1e-3, sup_norm(start));
  for (int s = 0; s < opts.extra_starts; ++s) {
    // Deterministic perturbations of the initial guess.
    Vec v = start;
    const int axis = s % st.dim();
    const double sign = (s / st.dim()) % 2 == 0 ? 1.0 : -1.0;
    v[axis] += sign * 0.5 * scale * (1 + s / (2 * st.dim()));
    const ShotResult other = shoot(st, x, y, v, opts);
    if (other.converged && sup_norm(other.v - best.v) > 1e-6 * (1.0 + sup_norm(best.v))) {
      fail(ErrorCode::AmbiguousGeodesic, "two distinct geodesics connect the points");
    }
  }
  return best.v;
}

Vec interpolate_F(const WeightedSpacetime& st, const Vec& x, const Vec& y, double t, const LogOptions& opts) {
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  const Vec v = log_map(st, x, y, opts);
  return exp_map(st, TangentPoint{x, v}, t, opts.ode);
}

SeparationValue separation_from_log(const WeightedSpacetime& st, const Vec& x, const Vec& v) {
  SeparationValue s;
  if (v.isZero(0.0)) {
    s.minus_infinity = false;
    s.value = 0.0;
    s.character = CausalCharacter::Lightlike;
    return s;
  }
  const CausalClass c = causal_type(st, TangentPoint{x, v});
  s.character = c.character;
  if (c.orientation != TimeOrientation::Future) return s;
  s.minus_infinity = false;
  if (c.character == CausalCharacter::Timelike) {
    const Mat g = st.metric(as_span(x));
    s.value = std::sqrt(v.dot(g * v));
  }
  return s;
}

SeparationValue time_separation(const WeightedSpacetime& st, const Vec& x, const Vec& y, const LogOptions& opts) {
  return separation_from_log(st, x, log_map(st, x, y, opts));
}

double geodesic_residual(const WeightedSpacetime& st, const GeodesicSolution& sol) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < sol.t.size(); ++k) {
    const double dt = sol.t[k + 1] - sol.t[k - 1];
    const Vec acc = (sol.v[k + 1] - sol.v[k - 1]) / dt;
    const Christoffels gam = christoffels_from_jet(metric_jet(st, as_span(sol.x[k]), false), st.dim());
    worst = std::max(worst, sup_norm(acc + gam.contract(sol.v[k], sol.v[k])));
  }
  return worst;
}

}  // namespace ltbm
