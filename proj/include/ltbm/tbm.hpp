#pragma once

// Transport construction and the volume checks that combine into the
// counterexample to the Brunn-Minkowski inequality under a Ricci deficit.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltbm/distortion.hpp"
#include "ltbm/jacobi.hpp"
#include "ltbm/regions.hpp"

namespace ltbm {

/// Gradient of phi(y) = g(v0, w) + (alpha/2) g(w, w), w = Log_{x0}(y), with
/// alpha = -D psi(v0) / (N - n).
struct TransportField {
  Vec x0;
  Vec v0;
  double alpha = 0.0;
  bool affine = false;  // constant metric: V(y) = v0 + alpha (y - x0) exactly
  VectorField field;
  std::function<double(const Vec&)> potential;
  double value_error = 0.0;       // sup |V(x0) - v0|
  double derivative_error = 0.0;  // sup |nabla V(x0) - alpha Id|, finite differences
};

/// InvariantFailure when V(x0) or nabla V(x0) miss their targets.
TransportField build_transport_field(const WeightedSpacetime& st, const Vec& x0, const Vec& v0);

/// T_s(x) = exp_x(s V(x)).
Vec transport_map(const WeightedSpacetime& st, const TransportField& tf, const Vec& x, double s);

struct DistortionOdeReport {
  double lambda = 0.0, K = 0.0, epsilon = 0.0;
  double be_ricci = 0.0;  // at (x0, v0)
  std::vector<double> t, D, Ddd, residual;
  std::vector<double> error_term;          // from L and D psi along the curve
  std::vector<double> error_term_rebuilt;  // from the second differences of D
  double min_residual = 0.0;
  double tolerance = 0.0;
  bool holds = false;
  double sup_error_term = 0.0;
  double error_at_zero = 0.0;       // error term with L(0) = alpha Id
  double rebuild_discrepancy = 0.0; // sup |error_term - error_term_rebuilt|
};

/// Samples D on `samples` uniform points of [0, 1] (at least 16).
DistortionOdeReport check_distortion_ode(const WeightedSpacetime& st, const TransportField& tf, double lambda,
                                         double K, double epsilon, int samples = 65);

struct PipelineOptions {
  double voxel_fraction = 1.0 / 64;  // voxel side as a fraction of delta
  std::size_t random_pairs = 0;      // 0: 2^18 * 4^(n-2)
  int matched_resolution = 0;        // 0: automatic
  std::size_t theta_pairs = 4096;
  std::uint64_t seed = 1;
  int threads = 1;
  double tolerance = 0.0;            // 0: tolerance_band of the right side
  std::size_t containment_points = 0;  // 0: every kept interpolant point
  double containment_C = 0.0;          // 0: fit C from the checked points

  SampleCounts counts(int n, double voxel_side) const;
};

struct IntegratedReport {
  double lambda = 0.0, delta = 0.0, t = 0.0;
  double theta = 0.0;
  double measure_A = 0.0, measure_B = 0.0, measure_T = 0.0;
  double lhs = 0.0, rhs = 0.0;
  double residual = 0.0;         // lhs - rhs
  double scaled_residual = 0.0;  // residual / delta^{n/N}
  double gap = 0.0;              // refinement gaps carried to the N-th roots
};

IntegratedReport check_integrated_inequality(const WeightedSpacetime& st, const TransportField& tf, double lambda,
                                             double delta, double K, double t, const PipelineOptions& opts = {});

/// Least-squares fit of scaled_residual ~ C1 (delta + lambda^4) - C2 lambda^2.
struct IntegratedFit {
  double C1 = 0.0, C2 = 0.0, rms = 0.0;
};
IntegratedFit fit_integrated(std::span<const IntegratedReport> reports);

struct OptimalGeodesicReport {
  double lambda = 0.0, delta = 0.0, t = 0.0;
  double measure_G = 0.0, measure_T = 0.0;
  double gap = 0.0;         // m^{1/N}(G) - m^{1/N}(T_{lambda t} A)
  double scaled_gap = 0.0;  // gap / delta^{n/N}
  double refinement = 0.0;  // refinement gaps carried to the N-th roots
  double max_distance = 0.0;
  double ratio = 0.0;  // max_distance / (delta (delta + lambda^3))
  double C = 0.0;      // given, or the fitted ratio
  double rho = 0.0;    // C (delta + lambda^3)
  std::size_t checked = 0, failures = 0;
  std::size_t fatten_missing = 0;  // interpolant voxels outside the fattened image
};

/// ContainmentFailure when a checked point is farther than delta * rho for a
/// given C.
OptimalGeodesicReport compare_optimal_geodesic(const WeightedSpacetime& st, const TransportField& tf, double lambda,
                                               double delta, double t, const PipelineOptions& opts = {});

/// Slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

enum class Verdict { Holds, Violated, Inconclusive };
const char* to_string(Verdict v);

struct TbmCheckResult {
  double t = 0.0;
  double theta = 0.0, theta_resolution = 0.0;
  std::size_t dual_samples = 0;
  double measure_A = 0.0, measure_B = 0.0, measure_G = 0.0;
  double lhs = 0.0, rhs = 0.0;
  double margin = 0.0;       // lhs - rhs
  double uncertainty = 0.0;  // refinement gaps + theta effect on tau
  double tolerance = 0.0;
  std::size_t pairs_used = 0, pairs_skipped = 0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Violated iff margin + uncertainty < -tolerance; holds iff
/// margin - uncertainty >= -tolerance. DualizabilityUnverified when a
/// sampled pair has non-positive separation.
std::vector<TbmCheckResult> check_tbm(const WeightedSpacetime& st, const RegionSpec& A, const RegionSpec& B,
                                      double K, std::span<const double> ts, double q,
                                      const PipelineOptions& opts = {});

struct SearchBox {
  Vec lo, hi;             // base points; empty: chart inset by a quarter
  double rapidity = 1.0;  // |boost| of v0 relative to the frame at x0
  std::size_t points = 64;
};

struct CounterexampleReport {
  enum class State { Certified, None, Inconclusive } state = State::None;
  Vec x0, v0;
  double min_be_ricci = 0.0;        // over the scan
  double candidate_be_ricci = 0.0;  // at (x0, v0)
  std::size_t scanned = 0;
  double lambda = 0.0, delta = 0.0;
  double best_margin = 0.0;  // most negative margin + uncertainty seen
  std::optional<TbmCheckResult> result;
  std::vector<TbmCheckResult> attempts;
  std::string note;
};
const char* to_string(CounterexampleReport::State s);

CounterexampleReport find_counterexample(const WeightedSpacetime& st, double K, const SearchBox& box,
                                         double epsilon_floor, const PipelineOptions& opts = {},
                                         int lambda_levels = 5);

}  // namespace ltbm
