#pragma once

// Geodesic initial and boundary value problems, the interpolation map F_t and
// the time separation in the unique-geodesic regime.

#include <span>
#include <vector>

#include "ltbm/geometry.hpp"
#include "ltbm/ode.hpp"

namespace ltbm {

struct GeodesicSolution {
  std::vector<double> t;
  std::vector<Vec> x;
  std::vector<Vec> v;
};

/// Samples of the geodesic with gamma(0)=x, gamma'(0)=v at the requested
/// parameter values (ascending, may start at 0).
GeodesicSolution solve_geodesic(const WeightedSpacetime& st, const TangentPoint& tp,
                                std::span<const double> times, const OdeSettings& ode = {});

Vec exp_map(const WeightedSpacetime& st, const TangentPoint& tp, double t, const OdeSettings& ode = {});

struct LogOptions {
  int max_iterations = 30;
  double tolerance = 1e-11;  // position residual, sup norm
  /// Extra shooting starts (perturbations of y - x); two distinct solutions
  /// raise AmbiguousGeodesic.
  int extra_starts = 0;
  OdeSettings ode{};
};

Vec log_map(const WeightedSpacetime& st, const Vec& x, const Vec& y, const LogOptions& opts = {});

/// exp(t Log(x, y)).
Vec interpolate_F(const WeightedSpacetime& st, const Vec& x, const Vec& y, double t,
                  const LogOptions& opts = {});

/// Time separation with -infinity as an explicit tag.
struct SeparationValue {
  bool minus_infinity = true;
  double value = 0.0;  // meaningful when !minus_infinity
  CausalCharacter character = CausalCharacter::Spacelike;

  double positive_part() const { return minus_infinity ? 0.0 : value; }
};

/// Classification of a Log vector: future causal gives sqrt(g(v,v)).
SeparationValue separation_from_log(const WeightedSpacetime& st, const Vec& x, const Vec& v);
SeparationValue time_separation(const WeightedSpacetime& st, const Vec& x, const Vec& y,
                                const LogOptions& opts = {});

/// Residual |gamma'' + Gamma(gamma', gamma')| at interior samples, estimated
/// from the sampled velocities by central differences.
double geodesic_residual(const WeightedSpacetime& st, const GeodesicSolution& sol);

}  // namespace ltbm
