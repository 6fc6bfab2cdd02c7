#include "ltbm/jacobi.hpp"

#include <algorithm>
#include <cmath>

#include "ltbm/errors.hpp"

namespace ltbm {

Mat frame_inverse(const Mat& frame, const Mat& g) {
  const int n = static_cast<int>(frame.cols());
  Mat eta = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const Vec e = frame.col(a);
    eta(a, a) = e.dot(g * e) > 0 ? 1.0 : -1.0;
  }
  return eta * frame.transpose() * g;
}

Mat frame_tidal(const WeightedSpacetime& st, const Vec& x, const Vec& v, const Mat& frame) {
  if (st.is_flat()) return Mat::Zero(st.dim(), st.dim());
  const Mat tidal = riemann(st, as_span(x)).tidal(v);
  return frame_inverse(frame, st.metric(as_span(x))) * tidal * frame;
}

namespace {

Mat block(const OdeState& y, Eigen::Index offset, int n) {
  Mat m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) m(i, j) = y[offset + j * n + i];
  }
  return m;
}

void put_block(OdeState& y, Eigen::Index offset, const Mat& m) {
  const int n = static_cast<int>(m.rows());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) y[offset + j * n + i] = m(i, j);
  }
}

}  // namespace

JacobiState propagate_jacobi(const WeightedSpacetime& st, const TangentPoint& tp, const Mat& M0,
                             const Mat& Mdot0, std::span<const double> times, const Mat* frame0,
                             const OdeSettings& ode) {
  const int n = st.dim();
  if (!st.chart().contains(as_span(tp.x))) fail(ErrorCode::LeftChart, "start point outside the chart");
  const Mat E0 = frame0 ? *frame0 : orthonormal_frame(st.metric(as_span(tp.x)), tp.v);

  JacobiState js;
  js.t.assign(times.begin(), times.end());
  if (st.is_flat()) {
    for (double t : times) {
      Vec x = tp.x + t * tp.v;
      if (!st.chart().contains(as_span(x))) fail(ErrorCode::LeftChart, "geodesic left the chart domain");
      js.x.push_back(x);
      js.v.push_back(tp.v);
      js.frame.push_back(E0);
      js.M.push_back(M0 + t * Mdot0);
      js.Mdot.push_back(Mdot0);
      js.R.push_back(Mat::Zero(n, n));
    }
    return js;
  }

  const double margin = 2.0 * std::max(st.first_step(), st.second_step());
  const Eigen::Index oE = 2 * n, oM = oE + n * n, oD = oM + n * n;
  OdeRhs rhs = [&](double, const OdeState& y, OdeState& dy) {
    const Vec x = y.head(n);
    const Vec u = y.segment(n, n);
    if (st.chart().margin(as_span(x)) < margin) fail(ErrorCode::LeftChart, "geodesic left the chart domain");
    const MetricJet jet = metric_jet(st, as_span(x), true);
    const Christoffels gam = christoffels_from_jet(jet, n);
    const Riemann riem = riemann_from_jet(jet, n);
    const Mat E = block(y, oE, n);
    const Mat M = block(y, oM, n);
    const Mat Md = block(y, oD, n);
    Mat dE(n, n);
    for (int a = 0; a < n; ++a) dE.col(a) = -gam.contract(u, E.col(a));
    const Mat Rf = frame_inverse(E, jet.g) * riem.tidal(u) * E;
    dy.resize(y.size());
    dy.head(n) = u;
    dy.segment(n, n) = -gam.contract(u, u);
    put_block(dy, oE, dE);
    put_block(dy, oM, Md);
    put_block(dy, oD, -Rf * M);
  };
  OdeState y0(2 * n + 3 * n * n);
  y0.head(n) = tp.x;
  y0.segment(n, n) = tp.v;
  put_block(y0, oE, E0);
  put_block(y0, oM, M0);
  put_block(y0, oD, Mdot0);
  const auto states = integrate(rhs, 0.0, y0, times, ode);
  for (const auto& y : states) {
    js.x.push_back(y.head(n));
    js.v.push_back(y.segment(n, n));
    js.frame.push_back(block(y, oE, n));
    js.M.push_back(block(y, oM, n));
    js.Mdot.push_back(block(y, oD, n));
    js.R.push_back(frame_tidal(st, js.x.back(), js.v.back(), js.frame.back()));
  }
  return js;
}

double jacobi_residual(const JacobiState& js) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < js.t.size(); ++k) {
    const double dt = js.t[k + 1] - js.t[k - 1];
    const Mat acc = (js.Mdot[k + 1] - js.Mdot[k - 1]) / dt;
    worst = std::max(worst, (acc + js.R[k] * js.M[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

JacobiState riccati_state(JacobiState js) {
  js.L.clear();
  for (std::size_t k = 0; k < js.t.size(); ++k) {
    const Eigen::FullPivLU<Mat> lu(js.M[k]);
    if (!lu.isInvertible() || std::abs(js.M[k].determinant()) < 1e-12) {
      fail(ErrorCode::SingularM, "M is singular at t=" + std::to_string(js.t[k]));
    }
    js.L.push_back(js.Mdot[k] * lu.inverse());
  }
  return js;
}

Mat exp_jacobian(const WeightedSpacetime& st, const TangentPoint& tp, const OdeSettings& ode) {
  const int n = st.dim();
  if (st.is_flat()) return Mat::Identity(n, n);
  const double times[] = {0.0, 1.0};
  const JacobiState js =
      propagate_jacobi(st, tp, Mat::Zero(n, n), Mat::Identity(n, n), times, nullptr, ode);
  return js.frame[1] * js.M[1] * frame_inverse(js.frame[0], st.metric(as_span(tp.x)));
}

TidalOperator tidal_operator(const WeightedSpacetime& st, const Vec& x, const Vec& v) {
  const int n = st.dim();
  const Mat g = metric_at(st, as_span(x));
  if (!(v.dot(g * v) > kLightlikeBand)) fail(ErrorCode::InvalidArgument, "tidal operator needs a timelike vector");
  TidalOperator op;
  op.x = x;
  op.v = v;
  op.frame = orthonormal_frame(g, v);
  op.matrix = frame_tidal(st, x, v, op.frame);

  const double scale = 1.0 + op.matrix.cwiseAbs().maxCoeff();
  const Mat S = op.matrix.bottomRightCorner(n - 1, n - 1);
  const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
  const double leak = std::max(op.matrix.row(0).cwiseAbs().maxCoeff(), op.matrix.col(0).cwiseAbs().maxCoeff());
  if (asym > 1e-6 * scale || leak > 1e-6 * scale) {
    fail(ErrorCode::EigenFailure, "tidal operator is not self-adjoint within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (S + S.transpose()));
  if (es.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "eigen-decomposition failed");
  op.eigenvalues = Vec::Zero(n);
  op.eigenvectors = Mat::Zero(n, n);
  op.eigenvectors(0, 0) = 1.0;
  op.eigenvalues.tail(n - 1) = es.eigenvalues();
  op.eigenvectors.bottomRightCorner(n - 1, n - 1) = es.eigenvectors();
  op.coordinate_eigenvectors = op.frame * op.eigenvectors;
  return op;
}

BoundaryJacobi boundary_jacobi(const WeightedSpacetime& st, const Vec& x, const Vec& y,
                               std::span<const double> times, const LogOptions& opts) {
  const int n = st.dim();
  BoundaryJacobi bj;
  bj.log = log_map(st, x, y, opts);
  bj.t.assign(times.begin(), times.end());
  std::vector<double> grid(times.begin(), times.end());
  grid.push_back(1.0);
  const TangentPoint tp{x, bj.log};
  const Mat id = Mat::Identity(n, n);
  const Mat zero = Mat::Zero(n, n);
  bj.frame0 = orthonormal_frame(st.metric(as_span(x)), bj.log);
  const JacobiState a = propagate_jacobi(st, tp, id, zero, grid, &bj.frame0, opts.ode);
  const JacobiState b = propagate_jacobi(st, tp, zero, id, grid, &bj.frame0, opts.ode);
  const Mat& A1 = a.M.back();
  const Mat& B1 = b.M.back();
  // Relative threshold well above the integrator noise in B1.
  const Vec sv = Eigen::JacobiSVD<Mat>(B1).singularValues();
  const Eigen::FullPivLU<Mat> lu(B1);
  if (!lu.isInvertible() || sv[sv.size() - 1] <= 1e-7 * sv[0]) {
    fail(ErrorCode::ConjugatePoints, "endpoints are conjugate along the connecting geodesic");
  }
  const Mat B1inv = lu.inverse();
  for (std::size_t k = 0; k < times.size(); ++k) {
    bj.P.push_back(a.M[k] - b.M[k] * B1inv * A1);
    bj.Q.push_back(b.M[k] * B1inv);
  }
  return bj;
}

TaylorCheck df_taylor_check(const WeightedSpacetime& st, const Vec& x0, const Vec& v0, double lambda, double t) {
  const int n = st.dim();
  const Vec xl = exp_map(st, TangentPoint{x0, lambda * v0}, 1.0);
  const double times[] = {t};
  const BoundaryJacobi bj = boundary_jacobi(st, x0, xl, times);
  TaylorCheck tc;
  tc.P = bj.P[0];
  tc.Q = bj.Q[0];
  const Mat R = frame_tidal(st, x0, v0, bj.frame0);
  const Mat id = Mat::Identity(n, n);
  const double c = lambda * lambda * t * (1.0 - t) / 6.0;
  tc.model_P = (1.0 - t) * id + c * (2.0 - t) * R;
  tc.model_Q = t * id + c * (1.0 + t) * R;
  Eigen::MatrixXd diff(n, 2 * n);
  diff << (tc.P - tc.model_P), (tc.Q - tc.model_Q);
  tc.error = Eigen::JacobiSVD<Eigen::MatrixXd>(diff).singularValues()(0);
  return tc;
}

Mat field_jacobian(const WeightedSpacetime& st, const VectorField& field, const Vec& x) {
  if (field.jacobian) return field.jacobian(x);
  const int n = st.dim();
  const double h = st.first_step();
  Mat jac(n, n);
  for (int j = 0; j < n; ++j) {
    auto diff = [&](double s) {
      Vec xp = x, xm = x;
      xp[j] += s;
      xm[j] -= s;
      return Vec((field.value(xp) - field.value(xm)) / (2.0 * s));
    };
    const Vec d = st.fd().richardson ? Vec((4.0 * diff(0.5 * h) - diff(h)) / 3.0) : diff(h);
    jac.col(j) = d;
  }
  return jac;
}

Mat covariant_derivative(const WeightedSpacetime& st, const VectorField& field, const Vec& x) {
  const int n = st.dim();
  Mat d = field_jacobian(st, field, x);
  if (st.is_flat()) return d;
  const Vec V = field.value(x);
  const Christoffels gam = christoffels(st, as_span(x));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) d(i, j) += gam(i, j, k) * V[k];
    }
  }
  return d;
}

TransportDerivative transport_derivative(const WeightedSpacetime& st, const Vec& x, const VectorField& field,
                                         double lambda) {
  const int n = st.dim();
  const Vec V = field.value(x);
  const Mat g = st.metric(as_span(x));
  const Mat E0 = orthonormal_frame(g, V);
  const Mat E0inv = frame_inverse(E0, g);
  const Mat DV = E0inv * covariant_derivative(st, field, x) * E0;
  const double times[] = {lambda};
  const JacobiState js = propagate_jacobi(st, TangentPoint{x, V}, Mat::Identity(n, n), DV, times, &E0);
  TransportDerivative td;
  td.exact = js.M[0];
  td.model = Mat::Identity(n, n) + lambda * DV - 0.5 * lambda * lambda * frame_tidal(st, x, V, E0);
  td.coordinate = js.frame[0] * js.M[0] * E0inv;
  td.model_error = (td.exact - td.model).cwiseAbs().maxCoeff();
  return td;
}

DistortionProfile volume_distortion(const WeightedSpacetime& st, const Vec& x, const VectorField& field,
                                    double lambda, std::span<const double> tgrid) {
  const int n = st.dim();
  const Vec V = field.value(x);
  const Mat g = st.metric(as_span(x));
  const Mat E0 = orthonormal_frame(g, V);
  const Mat DV = frame_inverse(E0, g) * covariant_derivative(st, field, x) * E0;
  std::vector<double> times;
  for (double t : tgrid) times.push_back(lambda * t);
  DistortionProfile prof;
  prof.t.assign(tgrid.begin(), tgrid.end());
  prof.state = propagate_jacobi(st, TangentPoint{x, V}, Mat::Identity(n, n), DV, times, &E0);
  const double psi0 = st.weight(as_span(x));
  const double N = st.synthetic_dim();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double det = prof.state.M[k].determinant();
    if (!(det > 0.0)) fail(ErrorCode::SingularM, "det DT vanishes at t=" + std::to_string(tgrid[k]));
    prof.detM.push_back(det);
    const double w = std::exp(psi0 - st.weight(as_span(prof.state.x[k])));
    prof.D.push_back(std::pow(w * det, 1.0 / N));
  }
  return prof;
}

}  // namespace ltbm
