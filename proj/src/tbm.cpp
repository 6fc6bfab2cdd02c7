#include "ltbm/tbm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltbm/errors.hpp"
#include "ltbm/sampling.hpp"

namespace ltbm {

namespace {

double sup_norm(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Central differences with one Richardson level at a step suited to fields
// that carry integrator noise (much larger than the metric step).
Mat noisy_field_jacobian(const std::function<Vec(const Vec&)>& V, const Vec& x, double h) {
  const auto n = x.size();
  Mat jac(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto diff = [&](double s) {
      Vec xp = x, xm = x;
      xp[j] += s;
      xm[j] -= s;
      return Vec((V(xp) - V(xm)) / (2.0 * s));
    };
    jac.col(j) = (4.0 * diff(0.5 * h) - diff(h)) / 3.0;
  }
  return jac;
}

double nth_root_gap(double m, double gap, double N) {
  return gap > 0.0 ? std::pow(m, 1.0 / N - 1.0) * gap / N : 0.0;
}

double finite_tau(double K, double N, double t, double theta) {
  const ExtendedReal v = tau(K, N, t, theta);
  if (v.infinite) fail(ErrorCode::PreconditionFailed, "distortion coefficient is infinite at theta");
  return v.value;
}

double tau_slope(double K, double N, double t, double theta) {
  const double h = 1e-6 * (1.0 + theta);
  const double lo = std::max(0.0, theta - h);
  return (finite_tau(K, N, t, theta + h) - finite_tau(K, N, t, lo)) / (theta + h - lo);
}

double error_term(const Mat& L, double dpsi, int n, double N) {
  const double tr = L.trace();
  const double tr2 = (L * L).trace();
  double e = tr * tr / n - tr2;
  if (N > n) {
    const double c = dpsi + (N - n) / n * tr;
    e -= n / (N * (N - n)) * c * c;
  }
  return e;
}

RegionSpec transported(const WeightedSpacetime& st, const TransportField& tf, const RegionSpec& A, double s,
                       const std::string& name) {
  const WeightedSpacetime* sp = &st;
  const TransportField* f = &tf;
  return map_region(A, [sp, f, s](const Vec& x) { return transport_map(*sp, *f, x, s); }, name);
}

}  // namespace

// ---------------------------------------------------------------- transport field

TransportField build_transport_field(const WeightedSpacetime& st, const Vec& x0, const Vec& v0) {
  const int n = st.dim();
  const Mat g0 = metric_at(st, as_span(x0));
  if (std::abs(v0.dot(g0 * v0) - 1.0) > 1e-8) fail(ErrorCode::InvalidArgument, "v0 must be unit timelike");
  TransportField tf;
  tf.x0 = x0;
  tf.v0 = v0;
  const double N = st.synthetic_dim();
  if (st.weighted()) {
    const double dpsi = weight_derivatives(st, as_span(x0)).grad.dot(v0);
    tf.alpha = -dpsi / (N - n);
  }
  const double alpha = tf.alpha;
  if (st.is_flat()) {
    tf.affine = true;
    tf.field.value = [x0, v0, alpha](const Vec& y) { return Vec(v0 + alpha * (y - x0)); };
    tf.field.jacobian = [n, alpha](const Vec&) { return Mat(alpha * Mat::Identity(n, n)); };
    tf.potential = [x0, v0, alpha, g0](const Vec& y) {
      const Vec w = y - x0;
      return v0.dot(g0 * w) + 0.5 * alpha * w.dot(g0 * w);
    };
  } else {
    const WeightedSpacetime* sp = &st;
    auto value = [sp, x0, v0, alpha, g0, n](const Vec& y) {
      const Vec w = (y - x0).cwiseAbs().maxCoeff() == 0.0 ? Vec(Vec::Zero(n)) : log_map(*sp, x0, y);
      const Mat Dw = exp_jacobian(*sp, TangentPoint{x0, w}).inverse();
      const Vec dphi = Dw.transpose() * (g0 * (v0 + alpha * w));
      return Vec(sp->metric(as_span(y)).ldlt().solve(dphi));
    };
    tf.field.value = value;
    const double h = 1e-3 * st.chart().scale();
    tf.field.jacobian = [value, h](const Vec& y) { return noisy_field_jacobian(value, y, h); };
    tf.potential = [sp, x0, v0, alpha, g0](const Vec& y) {
      const Vec w = log_map(*sp, x0, y);
      return v0.dot(g0 * w) + 0.5 * alpha * w.dot(g0 * w);
    };
  }
  tf.value_error = (tf.field.value(x0) - v0).cwiseAbs().maxCoeff();
  tf.derivative_error = sup_norm(covariant_derivative(st, tf.field, x0) - alpha * Mat::Identity(n, n));
  if (tf.value_error > 1e-8 || tf.derivative_error > 1e-6) {
    std::ostringstream os;
    os << "transport field misses its targets: |V(x0)-v0| = " << tf.value_error
       << ", |DV(x0)-alpha Id| = " << tf.derivative_error;
    fail(ErrorCode::InvariantFailure, os.str());
  }
  return tf;
}

Vec transport_map(const WeightedSpacetime& st, const TransportField& tf, const Vec& x, double s) {
  const Vec V = tf.field.value(x);
  if (tf.affine || s == 0.0) return Vec(x + s * V);
  return exp_map(st, TangentPoint{x, V}, s);
}

// ---------------------------------------------------------------- distortion ODE

DistortionOdeReport check_distortion_ode(const WeightedSpacetime& st, const TransportField& tf, double lambda,
                                         double K, double epsilon, int samples) {
  if (samples < 16) fail(ErrorCode::GridTooCoarse, "need at least 16 samples");
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "lambda must be positive");
  const int n = st.dim();
  const double N = st.synthetic_dim();
  DistortionOdeReport rep;
  rep.lambda = lambda;
  rep.K = K;
  rep.epsilon = epsilon;
  rep.be_ricci = bakry_emery_ricci(st, as_span(tf.x0), tf.v0);
  for (int i = 0; i < samples; ++i) rep.t.push_back(static_cast<double>(i) / (samples - 1));
  DistortionProfile prof = volume_distortion(st, tf.x0, tf.field, lambda, rep.t);
  prof.state = riccati_state(std::move(prof.state));
  rep.D = prof.D;

  const double dt = 1.0 / (samples - 1);
  const auto& D = rep.D;
  const int m = samples;
  rep.Ddd.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    const auto at = [&](int k) { return D[static_cast<std::size_t>(k)]; };
    double d2;
    if (i >= 2 && i <= m - 3) {
      d2 = (-at(i - 2) + 16 * at(i - 1) - 30 * at(i) + 16 * at(i + 1) - at(i + 2)) / 12.0;
    } else if (i == 1 || i == m - 2) {
      d2 = at(i - 1) - 2 * at(i) + at(i + 1);
    } else if (i == 0) {
      d2 = 2 * at(0) - 5 * at(1) + 4 * at(2) - at(3);
    } else {
      d2 = 2 * at(m - 1) - 5 * at(m - 2) + 4 * at(m - 3) - at(m - 4);
    }
    rep.Ddd[static_cast<std::size_t>(i)] = d2 / (dt * dt);
  }

  double maxD = 0.0;
  for (double d : D) maxD = std::max(maxD, d);
  // band plus the integrator tolerance amplified by the second difference
  rep.tolerance = tolerance_band(lambda * lambda * maxD) + 16.0 * 1e-10 * maxD / (dt * dt);
  rep.min_residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double r = rep.Ddd[k] + (K - epsilon) / N * lambda * lambda * D[k];
    rep.residual.push_back(r);
    rep.min_residual = std::min(rep.min_residual, r);
    const Vec& x = prof.state.x[k];
    const Vec& v = prof.state.v[k];
    const double dpsi = st.weighted() ? weight_derivatives(st, as_span(x)).grad.dot(v) : 0.0;
    const double e = error_term(prof.state.L[k], dpsi, n, N);
    rep.error_term.push_back(e);
    rep.sup_error_term = std::max(rep.sup_error_term, std::abs(e));
    const double rebuilt = N * rep.Ddd[k] / (lambda * lambda * D[k]) + bakry_emery_ricci(st, as_span(x), v);
    rep.error_term_rebuilt.push_back(rebuilt);
    rep.rebuild_discrepancy = std::max(rep.rebuild_discrepancy, std::abs(rebuilt - e));
  }
  rep.holds = rep.min_residual >= -rep.tolerance;
  const double dpsi0 = st.weighted() ? weight_derivatives(st, as_span(tf.x0)).grad.dot(tf.v0) : 0.0;
  rep.error_at_zero = error_term(tf.alpha * Mat::Identity(n, n), dpsi0, n, N);
  return rep;
}

// ---------------------------------------------------------------- volume checks

SampleCounts PipelineOptions::counts(int n, double voxel_side) const {
  SampleCounts c;
  c.matched_resolution = matched_resolution;
  c.random_pairs = random_pairs ? random_pairs : (std::size_t{1} << 18) << (2 * (n - 2));
  c.seed = seed;
  c.threads = threads;
  c.voxel_side = voxel_side;
  return c;
}

IntegratedReport check_integrated_inequality(const WeightedSpacetime& st, const TransportField& tf, double lambda,
                                             double delta, double K, double t, const PipelineOptions& opts) {
  const int n = st.dim();
  const double N = st.synthetic_dim();
  const double h = delta * opts.voxel_fraction;
  const RegionSpec A = eigen_cube(st, tf.x0, tf.v0, delta);
  const RegionSpec B = transported(st, tf, A, lambda, "T_lambda(A)");
  const RegionSpec T = transported(st, tf, A, lambda * t, "T_lambda_t(A)");
  const VolumeEstimate mA = measure(st, A, h, opts.threads);
  const VolumeEstimate mB = measure(st, B, h, opts.threads);
  const VolumeEstimate mT = measure(st, T, h, opts.threads);
  IntegratedReport r;
  r.lambda = lambda;
  r.delta = delta;
  r.t = t;
  r.theta = theta_statistic(st, A, B, K, opts.theta_pairs, opts.seed, opts.threads).value;
  r.measure_A = mA.value;
  r.measure_B = mB.value;
  r.measure_T = mT.value;
  const double a = finite_tau(K, N, 1.0 - t, r.theta);
  const double b = finite_tau(K, N, t, r.theta);
  r.lhs = std::pow(mT.value, 1.0 / N);
  r.rhs = a * std::pow(mA.value, 1.0 / N) + b * std::pow(mB.value, 1.0 / N);
  r.residual = r.lhs - r.rhs;
  r.scaled_residual = r.residual / std::pow(delta, n / N);
  r.gap = nth_root_gap(mT.value, mT.refinement_gap, N) + a * nth_root_gap(mA.value, mA.refinement_gap, N) +
          b * nth_root_gap(mB.value, mB.refinement_gap, N);
  return r;
}

IntegratedFit fit_integrated(std::span<const IntegratedReport> reports) {
  if (reports.size() < 2) fail(ErrorCode::InvalidArgument, "fit needs at least two reports");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(reports.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(reports.size()));
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const auto k = static_cast<Eigen::Index>(i);
    X(k, 0) = r.delta + std::pow(r.lambda, 4);
    X(k, 1) = -r.lambda * r.lambda;
    y[k] = r.scaled_residual;
  }
  const Eigen::Vector2d c = X.colPivHouseholderQr().solve(y);
  IntegratedFit fit;
  fit.C1 = c[0];
  fit.C2 = c[1];
  fit.rms = std::sqrt((X * c - y).squaredNorm() / static_cast<double>(reports.size()));
  return fit;
}

OptimalGeodesicReport compare_optimal_geodesic(const WeightedSpacetime& st, const TransportField& tf, double lambda,
                                               double delta, double t, const PipelineOptions& opts) {
  const int n = st.dim();
  const double N = st.synthetic_dim();
  const double h = delta * opts.voxel_fraction;
  const RegionSpec A = eigen_cube(st, tf.x0, tf.v0, delta);
  const RegionSpec B = transported(st, tf, A, lambda, "T_lambda(A)");
  const RegionSpec T = transported(st, tf, A, lambda * t, "T_lambda_t(A)");
  const RegionSpec G = interpolant_region(st, A, B, t, opts.counts(n, h));
  const VolumeEstimate mG = measure(st, G, h, opts.threads);
  const VolumeEstimate mT = measure(st, T, h, opts.threads);

  OptimalGeodesicReport r;
  r.lambda = lambda;
  r.delta = delta;
  r.t = t;
  r.measure_G = mG.value;
  r.measure_T = mT.value;
  r.gap = std::pow(mG.value, 1.0 / N) - std::pow(mT.value, 1.0 / N);
  r.scaled_gap = r.gap / std::pow(delta, n / N);
  r.refinement = nth_root_gap(mG.value, mG.refinement_gap, N) + nth_root_gap(mT.value, mT.refinement_gap, N);

  // corner pairs carry the extreme distances, so they are always checked
  const std::vector<Vec>& all = *G.points;
  std::vector<const Vec*> pts;
  const std::size_t nc = std::min(G.corner_points, all.size()), rest = all.size() - nc;
  const std::size_t stride =
      opts.containment_points && rest > opts.containment_points ? rest / opts.containment_points : 1;
  for (std::size_t i = 0; i < nc; ++i) pts.push_back(&all[i]);
  for (std::size_t i = nc; i < all.size(); i += stride) pts.push_back(&all[i]);
  std::vector<double> dist(pts.size());
  parallel_for(pts.size(), opts.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) dist[i] = distance_to_region(T, *pts[i]);
  });
  const double unit = delta * (delta + lambda * lambda * lambda);
  for (double d : dist) r.max_distance = std::max(r.max_distance, d);
  r.ratio = r.max_distance / unit;
  r.C = opts.containment_C > 0.0 ? opts.containment_C : r.ratio;
  r.rho = r.C * (delta + lambda * lambda * lambda);
  r.checked = dist.size();
  std::ostringstream bad;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] > delta * r.rho * (1.0 + 1e-9)) {
      if (r.failures++ < 5) bad << " (" << pts[i]->transpose() << ") d=" << dist[i];
    }
  }
  if (r.failures) {
    std::ostringstream os;
    os << r.failures << " interpolant points outside the ball of radius delta*rho, C=" << r.C << ":" << bad.str();
    fail(ErrorCode::ContainmentFailure, os.str());
  }
  // voxelwise chain: interpolant inside the fattened image
  const RegionSpec F = fatten(st, T, delta * r.rho, h, opts.threads);
  VoxelGrid g = *F.voxels;
  voxelize(st, G, g, opts.threads);
  for (std::size_t i = 0; i < g.size(); ++i) r.fatten_missing += g.occupied[i] && !F.voxels->occupied[i];
  return r;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorCode::InvalidArgument, "slope needs matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) fail(ErrorCode::InvalidArgument, "slope needs positive samples");
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// ---------------------------------------------------------------- TBM

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<TbmCheckResult> check_tbm(const WeightedSpacetime& st, const RegionSpec& A, const RegionSpec& B,
                                      double K, std::span<const double> ts, double q, const PipelineOptions& opts) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorCode::InvalidArgument, "q must lie in (0, 1)");
  const int n = st.dim();
  const double N = st.synthetic_dim();
  const ThetaStatistic th = theta_statistic(st, A, B, K, opts.theta_pairs, opts.seed, opts.threads);
  if (th.nonpositive) {
    fail(ErrorCode::DualizabilityUnverified,
         std::to_string(th.nonpositive) + " of " + std::to_string(th.samples) + " sampled pairs are not timelike");
  }
  const ThetaStatistic half = theta_statistic(st, A, B, K, opts.theta_pairs / 2, opts.seed, opts.threads);
  Vec lo, hi;
  bounding_box(A, lo, hi);
  const double extent = A.kind == RegionSpec::Kind::EigenCube && A.side > 0 ? A.side : (hi - lo).minCoeff();
  const double h = extent * opts.voxel_fraction;
  const VolumeEstimate mA = measure(st, A, h, opts.threads);
  const VolumeEstimate mB = measure(st, B, h, opts.threads);
  const double rA = std::pow(mA.value, 1.0 / N), rB = std::pow(mB.value, 1.0 / N);

  std::vector<TbmCheckResult> out;
  for (double t : ts) {
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
    TbmCheckResult r;
    r.t = t;
    r.theta = th.value;
    r.theta_resolution = std::abs(th.value - half.value);
    r.dual_samples = th.samples;
    const RegionSpec G = interpolant_region(st, A, B, t, opts.counts(n, h));
    const VolumeEstimate mG = measure(st, G, h, opts.threads);
    r.pairs_used = G.pairs_used;
    r.pairs_skipped = G.pairs_skipped;
    r.measure_A = mA.value;
    r.measure_B = mB.value;
    r.measure_G = mG.value;
    const double a = finite_tau(K, N, 1.0 - t, r.theta);
    const double b = finite_tau(K, N, t, r.theta);
    r.lhs = std::pow(mG.value, 1.0 / N);
    r.rhs = a * rA + b * rB;
    r.margin = r.lhs - r.rhs;
    const double theta_effect =
        (std::abs(tau_slope(K, N, 1.0 - t, r.theta)) * rA + std::abs(tau_slope(K, N, t, r.theta)) * rB) *
        r.theta_resolution;
    r.uncertainty = nth_root_gap(mG.value, mG.refinement_gap, N) + a * nth_root_gap(mA.value, mA.refinement_gap, N) +
                    b * nth_root_gap(mB.value, mB.refinement_gap, N) + theta_effect;
    r.tolerance = (opts.tolerance > 0.0 ? opts.tolerance : 1e-6) * r.rhs;
    if (r.margin + r.uncertainty < -r.tolerance) {
      r.verdict = Verdict::Violated;
    } else if (r.margin - r.uncertainty >= -r.tolerance) {
      r.verdict = Verdict::Holds;
    } else {
      r.verdict = Verdict::Inconclusive;
    }
    out.push_back(r);
  }
  return out;
}

const char* to_string(CounterexampleReport::State s) {
  switch (s) {
    case CounterexampleReport::State::Certified: return "certified";
    case CounterexampleReport::State::None: return "none";
    case CounterexampleReport::State::Inconclusive: return "inconclusive";
  }
  return "?";
}

CounterexampleReport find_counterexample(const WeightedSpacetime& st, double K, const SearchBox& box,
                                         double epsilon_floor, const PipelineOptions& opts, int lambda_levels) {
  const int n = st.dim();
  Vec lo = box.lo, hi = box.hi;
  if (lo.size() == 0) {
    lo = Vec(n);
    hi = Vec(n);
    for (int a = 0; a < n; ++a) {
      const double l = st.chart().lo[static_cast<std::size_t>(a)], u = st.chart().hi[static_cast<std::size_t>(a)];
      lo[a] = l + 0.25 * (u - l);
      hi[a] = u - 0.25 * (u - l);
    }
  }
  if (lo.size() != n || hi.size() != n) fail(ErrorCode::InvalidArgument, "search box has the wrong dimension");
  for (int a = 0; a < n; ++a) {
    const Vec c = 0.5 * (lo + hi);
    Vec p = c;
    p[a] = lo[a];
    Vec q = c;
    q[a] = hi[a];
    if (!st.chart().contains(as_span(p)) || !st.chart().contains(as_span(q)))
      fail(ErrorCode::InvalidArgument, "search box leaves the chart");
  }

  // Scan base points and boosts in a fixed order.
  QuasiRandom qr(2 * n - 1, opts.seed);
  std::vector<Vec> xs, vs;
  for (std::size_t k = 0; k < box.points; ++k) {
    const std::vector<double> u = qr.next();
    Vec x(n);
    for (int a = 0; a < n; ++a) x[a] = lo[a] + u[static_cast<std::size_t>(a)] * (hi[a] - lo[a]);
    Vec b(n - 1);
    for (int a = 0; a < n - 1; ++a) b[a] = box.rapidity * (2.0 * u[static_cast<std::size_t>(n + a)] - 1.0);
    const Mat E = orthonormal_frame(metric_at(st, as_span(x)), Vec::Unit(n, 0));
    const double beta = b.norm();
    Vec v = std::cosh(beta) * E.col(0);
    if (beta > 0.0) {
      for (int a = 0; a < n - 1; ++a) v += std::sinh(beta) * b[a] / beta * E.col(a + 1);
    }
    xs.push_back(x);
    vs.push_back(v);
  }
  // the frame's own time leg at the box center is always a candidate
  xs.push_back(0.5 * (lo + hi));
  vs.push_back(orthonormal_frame(metric_at(st, as_span(xs.back())), Vec::Unit(n, 0)).col(0));

  std::vector<double> ric(xs.size());
  parallel_for(xs.size(), opts.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ric[i] = bakry_emery_ricci(st, as_span(xs[i]), vs[i]);
  });
  CounterexampleReport rep;
  rep.scanned = xs.size();
  rep.min_be_ricci = *std::min_element(ric.begin(), ric.end());
  // Among qualifying directions take the least boosted one: its cube is
  // closest to the coordinate grid, which keeps voxel errors small.
  const double threshold = K - 2.0 * epsilon_floor;
  std::size_t pick = xs.size();
  double pick_boost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ric[i] > threshold) continue;
    const double boost = std::abs(vs[i][0]);
    if (boost < pick_boost - 1e-12) {
      pick = i;
      pick_boost = boost;
    }
  }
  if (pick == xs.size()) {
    rep.state = CounterexampleReport::State::None;
    rep.note = "no scanned direction has Bakry-Emery-Ricci <= K - 2 epsilon";
    return rep;
  }
  rep.x0 = xs[pick];
  rep.v0 = vs[pick];
  rep.candidate_be_ricci = ric[pick];

  bool unsure = false;
  rep.best_margin = std::numeric_limits<double>::infinity();
  try {
    const TransportField tf = build_transport_field(st, rep.x0, rep.v0);
    const double t_half[] = {0.5};
    for (int j = 0; j < lambda_levels; ++j) {
      const double lambda = 0.2 * std::ldexp(1.0, -j);
      const double delta = lambda * lambda * lambda;
      try {
        const RegionSpec A = eigen_cube(st, tf.x0, tf.v0, delta);
        const RegionSpec B = transported(st, tf, A, lambda, "T_lambda(A)");
        const TbmCheckResult r = check_tbm(st, A, B, K, t_half, 0.5, opts).front();
        rep.attempts.push_back(r);
        rep.best_margin = std::min(rep.best_margin, r.margin + r.uncertainty);
        if (r.verdict == Verdict::Violated) {
          rep.state = CounterexampleReport::State::Certified;
          rep.lambda = lambda;
          rep.delta = delta;
          rep.result = r;
          return rep;
        }
        if (r.verdict == Verdict::Inconclusive) unsure = true;
      } catch (const Error& e) {
        unsure = true;
        rep.note += std::string(error_code_name(e.code())) + " at lambda=" + std::to_string(lambda) + "; ";
      }
    }
  } catch (const Error& e) {
    unsure = true;
    rep.note += std::string(error_code_name(e.code())) + ": " + e.what();
  }
  rep.state = unsure ? CounterexampleReport::State::Inconclusive : CounterexampleReport::State::None;
  if (rep.note.empty()) rep.note = "lambda grid exhausted without a certified violation";
  return rep;
}

}  // namespace ltbm
