#pragma once

// Weighted Lorentzian spacetimes (M, g, m) on a single chart, signature
// (+,-,...,-), with curvature computed from finite differences of the metric
// component expressions.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ltbm/expr.hpp"
#include "ltbm/linalg.hpp"

namespace ltbm {

struct ChartDomain {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(std::span<const double> x) const;
  /// Distance (sup norm) from x to the chart boundary; negative outside.
  double margin(std::span<const double> x) const;
  /// Half of the widest coordinate extent, at least 1.
  double scale() const;
};

struct FiniteDifferenceSettings {
  double step = 1e-5;       // first-derivative step, relative to chart scale
  bool richardson = true;   // one Richardson extrapolation level (order 2 -> 4)
};

/// The ambient object: metric components and weight as expressions.
/// Immutable after creation.
class WeightedSpacetime {
 public:
  /// `metric` is row-major n*n; only the upper triangle is read and mirrored.
  /// Throws SignatureError / InvalidDimensionParam / Domain when the
  /// invariants fail at the sampled chart points.
  static WeightedSpacetime create(int n, std::vector<Expr> metric, Expr psi, double N,
                                  ChartDomain chart, FiniteDifferenceSettings fd = {},
                                  bool validate = true);

  int dim() const { return n_; }
  double synthetic_dim() const { return N_; }
  const Expr& psi() const { return psi_; }
  const Expr& metric_expr(int i, int j) const { return g_[static_cast<std::size_t>(i * n_ + j)]; }
  const ChartDomain& chart() const { return chart_; }
  const FiniteDifferenceSettings& fd() const { return fd_; }

  /// All metric components are coordinate-free constants.
  bool is_flat() const { return flat_; }
  bool weighted() const { return !psi_.is_zero(); }

  /// Absolute first- and second-derivative steps.
  double first_step() const;
  double second_step() const;

  /// Metric without signature validation (hot path).
  Mat metric(std::span<const double> x) const;
  double weight(std::span<const double> x) const { return psi_.eval(x); }

  std::string describe() const;

 private:
  int n_ = 0;
  std::vector<Expr> g_;
  Expr psi_;
  double N_ = 0.0;
  ChartDomain chart_;
  FiniteDifferenceSettings fd_;
  bool flat_ = false;
};

struct TangentPoint {
  Vec x;
  Vec v;
};

enum class CausalCharacter { Timelike, Lightlike, Spacelike };
enum class TimeOrientation { Future, Past, None };

struct CausalClass {
  CausalCharacter character;
  TimeOrientation orientation;
};

const char* to_string(CausalCharacter c);
const char* to_string(TimeOrientation o);

/// Gamma^k_ij, stored k-major.
struct Christoffels {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim * kMaxDim> data{};

  double& operator()(int k, int i, int j) { return data[static_cast<std::size_t>((k * kMaxDim + i) * kMaxDim + j)]; }
  double operator()(int k, int i, int j) const { return data[static_cast<std::size_t>((k * kMaxDim + i) * kMaxDim + j)]; }

  /// Gamma^k_ij a^i b^j.
  Vec contract(const Vec& a, const Vec& b) const;
};

/// R^l_{ijk} = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
/// i.e. the components of R(d_i, d_j) d_k.
struct Riemann {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim * kMaxDim * kMaxDim> data{};

  double& operator()(int l, int i, int j, int k) {
    return data[static_cast<std::size_t>(((l * kMaxDim + i) * kMaxDim + j) * kMaxDim + k)];
  }
  double operator()(int l, int i, int j, int k) const {
    return data[static_cast<std::size_t>(((l * kMaxDim + i) * kMaxDim + j) * kMaxDim + k)];
  }

  /// Ric_jk = R^i_{ijk}.
  Mat ricci() const;
  /// Coordinate matrix of the tidal map Z -> R(Z, v) v.
  Mat tidal(const Vec& v) const;
};

/// Metric value plus first and second coordinate derivatives at a point.
struct MetricJet {
  Mat g;
  Mat ginv;
  std::array<Mat, kMaxDim> dg;                         // dg[m] = d_m g
  std::array<std::array<Mat, kMaxDim>, kMaxDim> ddg;   // ddg[a][b] = d_a d_b g
};

struct CurvatureReport {
  Vec x;
  Mat metric;
  Christoffels christoffels;
  Riemann riemann;
  Mat ricci;
  Mat be_ricci;
  double step = 0.0;
};

/// g(x) with symmetry and (+,-,...,-) signature checks.
Mat metric_at(const WeightedSpacetime& st, std::span<const double> x);

CausalClass causal_type(const WeightedSpacetime& st, const TangentPoint& tp);

/// Tolerance band for the lightlike classification.
inline constexpr double kLightlikeBand = 1e-12;

/// Christoffel symbols by central differences (step h; <= 0 selects the default).
Christoffels christoffels(const WeightedSpacetime& st, std::span<const double> x, double h = 0.0);

MetricJet metric_jet(const WeightedSpacetime& st, std::span<const double> x, bool second_derivatives);
Christoffels christoffels_from_jet(const MetricJet& jet, int n);
Riemann riemann_from_jet(const MetricJet& jet, int n);

Riemann riemann(const WeightedSpacetime& st, std::span<const double> x);
Mat ricci(const WeightedSpacetime& st, std::span<const double> x);

/// Gradient and Hessian (coordinate partials) of psi.
struct WeightDerivatives {
  Vec grad;
  Mat hess;
};
WeightDerivatives weight_derivatives(const WeightedSpacetime& st, std::span<const double> x);

/// Ric(v,v) + Hess psi(v,v) - (D psi(v))^2 / (N - n).
double bakry_emery_ricci(const WeightedSpacetime& st, std::span<const double> x, const Vec& v);
/// The N-Bakry-Emery-Ricci tensor as a matrix.
Mat bakry_emery_ricci_matrix(const WeightedSpacetime& st, std::span<const double> x);

/// e^{-psi(x)} |det g(x)|^{1/2}.
double measure_density(const WeightedSpacetime& st, std::span<const double> x);

CurvatureReport curvature_report(const WeightedSpacetime& st, std::span<const double> x);

/// g-orthonormal frame (columns); the first leg is parallel to `first` when
/// that vector is timelike, otherwise to d/dx0.
Mat orthonormal_frame(const Mat& g, const Vec& first);

inline std::span<const double> as_span(const Vec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace ltbm
