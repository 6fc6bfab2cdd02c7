#pragma once

// Generalized sine, distortion coefficients and the sampled checks of the
// convexity characterization.

#include <span>
#include <string>

namespace ltbm {

/// A real number or +infinity, kept as a tag rather than an IEEE infinity.
struct ExtendedReal {
  bool infinite = false;
  double value = 0.0;

  static ExtendedReal finite(double v) { return {false, v}; }
  static ExtendedReal infinity() { return {true, 0.0}; }
  bool operator<(const ExtendedReal& o) const {
    if (infinite) return false;
    return o.infinite || value < o.value;
  }
};

double sin_k(double k, double t);

/// sin_k(t theta)/sin_k(theta) when k theta^2 < pi^2, otherwise +infinity.
/// theta = 0 returns t; t = 0 and t = 1 return 0 and 1 when finite.
ExtendedReal sigma(double k, double t, double theta);

/// t^{1/N} sigma_{K/(N-1)}^{(t)}(theta)^{1-1/N}. InvalidDimensionParam if N <= 1.
ExtendedReal tau(double K, double N, double t, double theta);

/// Band used by every sampled ">= 0" check.
inline double tolerance_band(double scale) { return 1e-6 * (1.0 + (scale < 0 ? -scale : scale)); }

struct ConvexityCheck {
  bool ode_holds = false;
  bool sigma_holds = false;
  double ode_margin = 0.0;    // min of f'' + k f over interior grid points
  double sigma_margin = 0.0;  // min of rhs - lhs over grid triples
};

/// f sampled at a uniform grid on [a, b]; at least 64 samples (GridTooCoarse).
ConvexityCheck check_convexity_equivalence(std::span<const double> f, double a, double b, double k);

struct MixedDistortionCheck {
  bool holds = false;
  double margin = 0.0;
  long skipped_infinite = 0;  // triples where a coefficient is +infinity
};

/// Mixed-distortion inequality for f = f_par * f_perp, checked on all grid triples.
/// PreconditionFailed when either factor violates its concavity condition.
MixedDistortionCheck check_mixed_distortion(std::span<const double> f_par, std::span<const double> f_perp,
                                            double a, double b, double k1, double n1, double k2, double n2);

}  // namespace ltbm
