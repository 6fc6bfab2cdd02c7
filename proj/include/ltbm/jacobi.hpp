#pragma once

// Matrix Jacobi fields and Riccati states in a parallel g-orthonormal frame.

#include <functional>
#include <span>
#include <vector>

#include "ltbm/geodesics.hpp"

namespace ltbm {

/// Samples along one geodesic. Matrices are expressed in the parallel frame
/// whose columns (coordinate components) are stored in `frame`.
struct JacobiState {
  std::vector<double> t;
  std::vector<Vec> x;
  std::vector<Vec> v;
  std::vector<Mat> frame;
  std::vector<Mat> M;
  std::vector<Mat> Mdot;
  std::vector<Mat> R;  // tidal operator of the velocity, frame components
  std::vector<Mat> L;  // filled by riccati_state
};

/// Coordinate components of the frame dual: E^{-1} = eta E^T g.
Mat frame_inverse(const Mat& frame, const Mat& g);

/// Tidal operator Z -> R(Z, v) v expressed in `frame`.
Mat frame_tidal(const WeightedSpacetime& st, const Vec& x, const Vec& v, const Mat& frame);

/// Integrates the geodesic from tp, a parallel frame (default: orthonormal
/// with first leg along tp.v) and M'' + R M = 0 from (M0, Mdot0).
JacobiState propagate_jacobi(const WeightedSpacetime& st, const TangentPoint& tp, const Mat& M0,
                             const Mat& Mdot0, std::span<const double> times,
                             const Mat* frame0 = nullptr, const OdeSettings& ode = {});

/// Max over interior samples of |M'' + R M| with M'' from central differences
/// of Mdot (samples must be uniform).
double jacobi_residual(const JacobiState& js);

/// L = Mdot M^{-1}; SingularM when M is not invertible.
JacobiState riccati_state(JacobiState js);

/// Derivative of v -> exp_x(v) at v (coordinates).
Mat exp_jacobian(const WeightedSpacetime& st, const TangentPoint& tp, const OdeSettings& ode = {});

struct TidalOperator {
  Vec x;
  Vec v;
  Mat frame;        // first leg along v
  Mat matrix;       // frame components
  Vec eigenvalues;  // eigenvalues[0] belongs to v itself
  Mat eigenvectors; // frame components, columns
  Mat coordinate_eigenvectors;
};

TidalOperator tidal_operator(const WeightedSpacetime& st, const Vec& x, const Vec& v);

/// DF_t(u, w) = P(t) u + Q(t) w in the parallel frame along Log(x, y).
struct BoundaryJacobi {
  Vec log;
  std::vector<double> t;
  std::vector<Mat> P;
  std::vector<Mat> Q;
  Mat frame0;
};

BoundaryJacobi boundary_jacobi(const WeightedSpacetime& st, const Vec& x, const Vec& y,
                               std::span<const double> times, const LogOptions& opts = {});

struct TaylorCheck {
  Mat P, Q;              // numeric
  Mat model_P, model_Q;  // second-order expansion
  double error = 0.0;    // operator norm of [P - model_P, Q - model_Q]
};

TaylorCheck df_taylor_check(const WeightedSpacetime& st, const Vec& x0, const Vec& v0, double lambda,
                            double t);

struct VectorField {
  std::function<Vec(const Vec&)> value;
  /// Coordinate Jacobian d_j V^i; finite differences when empty.
  std::function<Mat(const Vec&)> jacobian;
};

Mat field_jacobian(const WeightedSpacetime& st, const VectorField& field, const Vec& x);

/// Covariant derivative (nabla_j V^i) in coordinates.
Mat covariant_derivative(const WeightedSpacetime& st, const VectorField& field, const Vec& x);

struct TransportDerivative {
  Mat exact;       // DT_lambda, frame components
  Mat model;       // Id + lambda DV - (lambda^2/2) R_V
  Mat coordinate;  // E_end * exact * E0^{-1}
  double model_error = 0.0;
};

TransportDerivative transport_derivative(const WeightedSpacetime& st, const Vec& x,
                                         const VectorField& field, double lambda);

struct DistortionProfile {
  std::vector<double> t;     // normalized grid in [0, 1]
  std::vector<double> D;     // volume distortion at each t
  std::vector<double> detM;
  JacobiState state;         // sampled at lambda * t
};

DistortionProfile volume_distortion(const WeightedSpacetime& st, const Vec& x,
                                    const VectorField& field, double lambda,
                                    std::span<const double> tgrid);

}  // namespace ltbm
