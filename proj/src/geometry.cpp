#include "ltbm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ltbm/errors.hpp"

namespace ltbm {

namespace {

Vec shifted(std::span<const double> x, int axis, double delta) {
  Vec y(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) y[static_cast<Eigen::Index>(i)] = x[i];
  y[axis] += delta;
  return y;
}

Vec shifted2(std::span<const double> x, int a, double da, int b, double db) {
  Vec y = shifted(x, a, da);
  y[b] += db;
  return y;
}

void require_margin(const WeightedSpacetime& st, std::span<const double> x, double step) {
  const double m = st.chart().margin(x);
  if (m < 2.0 * step) {
    std::ostringstream os;
    os << "point is within " << m << " of the chart boundary; finite differences need margin "
       << 2.0 * step;
    fail(ErrorCode::Domain, os.str());
  }
}

// First partials of a matrix- or scalar-valued function by central differences.
template <class F>
auto central_first(F&& f, std::span<const double> x, int axis, double h, bool richardson) {
  auto d = [&](double s) { return ((f(shifted(x, axis, s)) - f(shifted(x, axis, -s))) / (2.0 * s)).eval(); };
  if (!richardson) return d(h);
  return ((4.0 * d(0.5 * h) - d(h)) / 3.0).eval();
}

template <class F, class T>
auto central_second(F&& f, const T& f0, std::span<const double> x, int a, int b, double k,
                    bool richardson) {
  auto d = [&](double s) {
    if (a == b) {
      return ((f(shifted(x, a, s)) - 2.0 * f0 + f(shifted(x, a, -s))) / (s * s)).eval();
    }
    return ((f(shifted2(x, a, s, b, s)) - f(shifted2(x, a, s, b, -s)) - f(shifted2(x, a, -s, b, s)) +
             f(shifted2(x, a, -s, b, -s))) /
            (4.0 * s * s))
        .eval();
  };
  if (!richardson) return d(k);
  return ((4.0 * d(0.5 * k) - d(k)) / 3.0).eval();
}

// Scalar wrapper so the templates above can treat psi like a 1x1 matrix.
using Scalar1 = Eigen::Matrix<double, 1, 1>;

}  // namespace

bool ChartDomain::contains(std::span<const double> x) const { return margin(x) >= 0.0; }

double ChartDomain::margin(std::span<const double> x) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lo.size() && i < x.size(); ++i) {
    m = std::min(m, std::min(x[i] - lo[i], hi[i] - x[i]));
  }
  return m;
}

double ChartDomain::scale() const {
  double s = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) s = std::max(s, 0.5 * (hi[i] - lo[i]));
  return s;
}

WeightedSpacetime WeightedSpacetime::create(int n, std::vector<Expr> metric, Expr psi, double N,
                                            ChartDomain chart, FiniteDifferenceSettings fd,
                                            bool validate) {
  if (n < 2 || n > kMaxDim)
    fail(ErrorCode::InvalidArgument, "dimension must be between 2 and " + std::to_string(kMaxDim));
  if (metric.size() != static_cast<std::size_t>(n * n))
    fail(ErrorCode::InvalidArgument, "metric needs n*n component expressions");
  if (chart.lo.size() != static_cast<std::size_t>(n) || chart.hi.size() != static_cast<std::size_t>(n))
    fail(ErrorCode::InvalidArgument, "chart bounds need n entries");
  for (int i = 0; i < n; ++i) {
    if (!(chart.lo[static_cast<std::size_t>(i)] < chart.hi[static_cast<std::size_t>(i)]))
      fail(ErrorCode::InvalidArgument, "chart bounds must satisfy lo < hi");
  }
  if (!(N > 1.0)) fail(ErrorCode::InvalidDimensionParam, "N must exceed 1");
  if (!psi.is_zero() && !(N > n))
    fail(ErrorCode::InvalidDimensionParam,
         "a non-trivial weight requires N > n (N - n appears in a denominator)");
  if (!(fd.step > 0.0)) fail(ErrorCode::InvalidArgument, "finite-difference step must be positive");

  WeightedSpacetime st;
  st.n_ = n;
  st.g_.resize(metric.size());
  st.flat_ = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Expr& e = metric[static_cast<std::size_t>(std::min(i, j) * n + std::max(i, j))];
      if (e.max_coordinate() >= n) fail(ErrorCode::UnknownSymbol, "metric references a coordinate >= n");
      st.g_[static_cast<std::size_t>(i * n + j)] = e;
      st.flat_ = st.flat_ && e.is_constant();
    }
  }
  if (psi.max_coordinate() >= n) fail(ErrorCode::UnknownSymbol, "weight references a coordinate >= n");
  st.psi_ = std::move(psi);
  st.N_ = N;
  st.chart_ = std::move(chart);
  st.fd_ = fd;

  if (validate) {
    // 3^n sample points slightly inside the chart.
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int idx = 0; idx < total; ++idx) {
      int r = idx;
      for (int i = 0; i < n; ++i) {
        const double lo = st.chart_.lo[static_cast<std::size_t>(i)];
        const double hi = st.chart_.hi[static_cast<std::size_t>(i)];
        const double inset = 1e-3 * (hi - lo);
        const int level = r % 3;
        r /= 3;
        x[static_cast<std::size_t>(i)] =
            level == 0 ? lo + inset : (level == 1 ? 0.5 * (lo + hi) : hi - inset);
      }
      const Mat g = metric_at(st, x);
      if (!(g(0, 0) > 0.0)) {
        fail(ErrorCode::Signature, "d/dx0 must be timelike to serve as the future direction");
      }
      (void)st.psi_.eval(x);
    }
  }
  return st;
}

double WeightedSpacetime::first_step() const { return fd_.step * chart_.scale(); }

double WeightedSpacetime::second_step() const { return std::sqrt(fd_.step) * chart_.scale(); }

Mat WeightedSpacetime::metric(std::span<const double> x) const {
  Mat g(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      const double v = g_[static_cast<std::size_t>(i * n_ + j)].eval(x);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

std::string WeightedSpacetime::describe() const {
  std::ostringstream os;
  os << "n=" << n_ << " N=" << N_ << " psi=" << psi_.print() << " g=[";
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      os << (i || j ? "; " : "") << "g" << i << j << "=" << metric_expr(i, j).print();
    }
  }
  os << "]";
  return os.str();
}

const char* to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
    case CausalCharacter::Spacelike: return "spacelike";
  }
  return "?";
}

const char* to_string(TimeOrientation o) {
  switch (o) {
    case TimeOrientation::Future: return "future";
    case TimeOrientation::Past: return "past";
    case TimeOrientation::None: return "none";
  }
  return "?";
}

Vec Christoffels::contract(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) s += (*this)(k, i, j) * a[i] * b[j];
    }
    out[k] = s;
  }
  return out;
}

Mat Riemann::ricci() const {
  Mat r = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += (*this)(i, i, j, k);
      r(j, k) = s;
    }
  }
  return r;
}

Mat Riemann::tidal(const Vec& v) const {
  Mat t = Mat::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) s += (*this)(l, i, j, k) * v[j] * v[k];
      }
      t(l, i) = s;
    }
  }
  return t;
}

Mat metric_at(const WeightedSpacetime& st, std::span<const double> x) {
  if (!st.chart().contains(x)) fail(ErrorCode::Domain, "point outside the chart domain");
  const Mat g = st.metric(x);
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int positive = 0;
  int negative = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= 1e-12 * scale || scale == 0.0) {
      fail(ErrorCode::Signature, "metric is degenerate (zero eigenvalue)");
    }
    (ev[i] > 0 ? positive : negative)++;
  }
  if (positive != 1 || negative != st.dim() - 1) {
    fail(ErrorCode::Signature, "metric signature is not (+,-,...,-)");
  }
  return g;
}

CausalClass causal_type(const WeightedSpacetime& st, const TangentPoint& tp) {
  const Mat g = st.metric(as_span(tp.x));
  const Vec gv = g * tp.v;
  const double gvv = tp.v.dot(gv);
  CausalClass c{};
  if (std::abs(gvv) <= kLightlikeBand) {
    c.character = CausalCharacter::Lightlike;
  } else if (gvv > 0.0) {
    c.character = CausalCharacter::Timelike;
  } else {
    c.character = CausalCharacter::Spacelike;
  }
  // g(v, d/dx0) fixes the orientation of causal vectors.
  const double g_t = gv[0];
  if (c.character == CausalCharacter::Spacelike || g_t == 0.0) {
    c.orientation = TimeOrientation::None;
  } else {
    c.orientation = g_t > 0.0 ? TimeOrientation::Future : TimeOrientation::Past;
  }
  return c;
}

MetricJet metric_jet(const WeightedSpacetime& st, std::span<const double> x, bool second_derivatives) {
  const int n = st.dim();
  MetricJet jet;
  jet.g = st.metric(x);
  const Eigen::FullPivLU<Mat> lu(jet.g);
  if (!lu.isInvertible()) fail(ErrorCode::SingularMetric, "metric is not invertible");
  jet.ginv = lu.inverse();
  for (int m = 0; m < n; ++m) {
    jet.dg[static_cast<std::size_t>(m)] = Mat::Zero(n, n);
    for (int b = 0; b < n; ++b) jet.ddg[static_cast<std::size_t>(m)][static_cast<std::size_t>(b)] = Mat::Zero(n, n);
  }
  if (st.is_flat()) return jet;

  const double h = st.first_step();
  const double k = st.second_step();
  require_margin(st, x, second_derivatives ? std::max(h, k) : h);
  const bool rich = st.fd().richardson;
  auto metric_fn = [&](const Vec& y) { return st.metric(as_span(y)); };
  for (int m = 0; m < n; ++m) {
    jet.dg[static_cast<std::size_t>(m)] = central_first(metric_fn, x, m, h, rich);
  }
  if (second_derivatives) {
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        Mat d2 = central_second(metric_fn, jet.g, x, a, b, k, rich);
        jet.ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = d2;
        jet.ddg[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = d2;
      }
    }
  }
  return jet;
}

Christoffels christoffels_from_jet(const MetricJet& jet, int n) {
  Christoffels c;
  c.n = n;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          const double lowered = jet.dg[static_cast<std::size_t>(i)](j, l) +
                                 jet.dg[static_cast<std::size_t>(j)](i, l) -
                                 jet.dg[static_cast<std::size_t>(l)](i, j);
          s += jet.ginv(k, l) * lowered;
        }
        c(k, i, j) = 0.5 * s;
        c(k, j, i) = 0.5 * s;
      }
    }
  }
  return c;
}

Riemann riemann_from_jet(const MetricJet& jet, int n) {
  const Christoffels gam = christoffels_from_jet(jet, n);

  // d_i Gamma^l_jk via the product rule on g^{lm} Gamma_{mjk}.
  std::array<double, kMaxDim * kMaxDim * kMaxDim * kMaxDim> dgam{};
  auto dgam_at = [&](int i, int l, int j, int k) -> double& {
    return dgam[static_cast<std::size_t>(((i * kMaxDim + l) * kMaxDim + j) * kMaxDim + k)];
  };
  for (int i = 0; i < n; ++i) {
    const Mat dginv = -jet.ginv * jet.dg[static_cast<std::size_t>(i)] * jet.ginv;
    for (int l = 0; l < n; ++l) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            const double lowered = 0.5 * (jet.dg[static_cast<std::size_t>(j)](k, m) +
                                          jet.dg[static_cast<std::size_t>(k)](j, m) -
                                          jet.dg[static_cast<std::size_t>(m)](j, k));
            const double dlowered =
                0.5 * (jet.ddg[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](k, m) +
                       jet.ddg[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)](j, m) -
                       jet.ddg[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)](j, k));
            s += dginv(l, m) * lowered + jet.ginv(l, m) * dlowered;
          }
          dgam_at(i, l, j, k) = s;
        }
      }
    }
  }

  Riemann r;
  r.n = n;
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double s = dgam_at(i, l, j, k) - dgam_at(j, l, i, k);
          for (int m = 0; m < n; ++m) s += gam(l, i, m) * gam(m, j, k) - gam(l, j, m) * gam(m, i, k);
          r(l, i, j, k) = s;
        }
      }
    }
  }
  return r;
}

Christoffels christoffels(const WeightedSpacetime& st, std::span<const double> x, double h) {
  if (h <= 0.0 || st.is_flat()) return christoffels_from_jet(metric_jet(st, x, false), st.dim());
  // Explicit step: plain central differences, no extrapolation.
  const int n = st.dim();
  require_margin(st, x, h);
  MetricJet jet;
  jet.g = st.metric(x);
  const Eigen::FullPivLU<Mat> lu(jet.g);
  if (!lu.isInvertible()) fail(ErrorCode::SingularMetric, "metric is not invertible");
  jet.ginv = lu.inverse();
  auto metric_fn = [&](const Vec& y) { return st.metric(as_span(y)); };
  for (int m = 0; m < n; ++m) jet.dg[static_cast<std::size_t>(m)] = central_first(metric_fn, x, m, h, false);
  return christoffels_from_jet(jet, n);
}

Riemann riemann(const WeightedSpacetime& st, std::span<const double> x) {
  return riemann_from_jet(metric_jet(st, x, true), st.dim());
}

Mat ricci(const WeightedSpacetime& st, std::span<const double> x) { return riemann(st, x).ricci(); }

WeightDerivatives weight_derivatives(const WeightedSpacetime& st, std::span<const double> x) {
  const int n = st.dim();
  WeightDerivatives d{Vec::Zero(n), Mat::Zero(n, n)};
  if (st.psi().is_constant()) return d;
  const double h = st.first_step();
  const double k = st.second_step();
  require_margin(st, x, std::max(h, k));
  const bool rich = st.fd().richardson;
  auto psi_fn = [&](const Vec& y) { return Scalar1(st.weight(as_span(y))); };
  const Scalar1 psi0(st.weight(x));
  for (int a = 0; a < n; ++a) {
    d.grad[a] = central_first(psi_fn, x, a, h, rich)(0, 0);
    for (int b = a; b < n; ++b) {
      const double v = central_second(psi_fn, psi0, x, a, b, k, rich)(0, 0);
      d.hess(a, b) = v;
      d.hess(b, a) = v;
    }
  }
  return d;
}

Mat bakry_emery_ricci_matrix(const WeightedSpacetime& st, std::span<const double> x) {
  const int n = st.dim();
  const MetricJet jet = metric_jet(st, x, true);
  Mat be = riemann_from_jet(jet, n).ricci();
  if (!st.weighted()) return be;
  const double N = st.synthetic_dim();
  if (!(N > n)) fail(ErrorCode::InvalidDimensionParam, "weighted spacetime requires N > n");
  const Christoffels gam = christoffels_from_jet(jet, n);
  const WeightDerivatives w = weight_derivatives(st, x);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double hess = w.hess(i, j);
      for (int k = 0; k < n; ++k) hess -= gam(k, i, j) * w.grad[k];
      be(i, j) += hess - w.grad[i] * w.grad[j] / (N - n);
    }
  }
  return be;
}

double bakry_emery_ricci(const WeightedSpacetime& st, std::span<const double> x, const Vec& v) {
  return v.dot(bakry_emery_ricci_matrix(st, x) * v);
}

double measure_density(const WeightedSpacetime& st, std::span<const double> x) {
  const Mat g = st.metric(x);
  const double det = g.determinant();
  if (det == 0.0) fail(ErrorCode::SingularMetric, "metric determinant vanishes");
  return std::exp(-st.weight(x)) * std::sqrt(std::abs(det));
}

CurvatureReport curvature_report(const WeightedSpacetime& st, std::span<const double> x) {
  const int n = st.dim();
  CurvatureReport rep;
  rep.x = Vec(n);
  for (int i = 0; i < n; ++i) rep.x[i] = x[static_cast<std::size_t>(i)];
  rep.metric = metric_at(st, x);
  const MetricJet jet = metric_jet(st, x, true);
  rep.christoffels = christoffels_from_jet(jet, n);
  rep.riemann = riemann_from_jet(jet, n);
  rep.ricci = rep.riemann.ricci();
  rep.be_ricci = bakry_emery_ricci_matrix(st, x);
  rep.step = st.first_step();
  return rep;
}

Mat orthonormal_frame(const Mat& g, const Vec& first) {
  const int n = static_cast<int>(g.rows());
  std::vector<Vec> candidates;
  if (first.size() == n && first.dot(g * first) > kLightlikeBand) candidates.push_back(first);
  for (int i = 0; i < n; ++i) candidates.push_back(Vec::Unit(n, i));

  Mat frame(n, n);
  std::vector<double> signs;
  int count = 0;
  for (const Vec& c : candidates) {
    if (count == n) break;
    Vec w = c;
    // Two passes of Gram-Schmidt for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (int a = 0; a < count; ++a) {
        const Vec ea = frame.col(a);
        w -= signs[static_cast<std::size_t>(a)] * ea.dot(g * w) * ea;
      }
    }
    const double norm2 = w.dot(g * w);
    if (std::abs(norm2) < 1e-10 * std::max(1.0, c.squaredNorm())) continue;
    frame.col(count) = w / std::sqrt(std::abs(norm2));
    signs.push_back(norm2 > 0 ? 1.0 : -1.0);
    ++count;
  }
  if (count != n) fail(ErrorCode::SingularMetric, "could not build an orthonormal frame");
  return frame;
}

}  // namespace ltbm
