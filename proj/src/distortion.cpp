#include "ltbm/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ltbm/errors.hpp"

namespace ltbm {

double sin_k(double k, double t) {
  if (std::abs(k) * t * t < 1e-6) {
    const double kt2 = k * t * t;
    return t * (1.0 - kt2 / 6.0 + kt2 * kt2 / 120.0 - kt2 * kt2 * kt2 / 5040.0);
  }
  if (k > 0) {
    const double r = std::sqrt(k);
    return std::sin(r * t) / r;
  }
  const double r = std::sqrt(-k);
  return std::sinh(r * t) / r;
}

ExtendedReal sigma(double k, double t, double theta) {
  if (k * theta * theta >= std::numbers::pi * std::numbers::pi) return ExtendedReal::infinity();
  if (t == 0.0) return ExtendedReal::finite(0.0);
  if (t == 1.0) return ExtendedReal::finite(1.0);
  if (theta == 0.0 || k == 0.0) return ExtendedReal::finite(t);
  return ExtendedReal::finite(sin_k(k, t * theta) / sin_k(k, theta));
}

ExtendedReal tau(double K, double N, double t, double theta) {
  if (!(N > 1.0)) fail(ErrorCode::InvalidDimensionParam, "tau requires N > 1");
  const ExtendedReal s = sigma(K / (N - 1.0), t, theta);
  if (s.infinite) return s;
  if (K == 0.0) return s;  // t^{1/N} t^{1-1/N} without the rounding
  return ExtendedReal::finite(std::pow(t, 1.0 / N) * std::pow(s.value, 1.0 - 1.0 / N));
}

namespace {

constexpr std::size_t kMinSamples = 64;

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

// min over interior points of (g'' + c g). Five-point second differences, so
// equality cases (g = sin_k) sit well inside the tolerance band.
double ode_margin(std::span<const double> g, double h, double c) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 2; i + 2 < g.size(); ++i) {
    const double d2 = (-g[i + 2] + 16.0 * g[i + 1] - 30.0 * g[i] + 16.0 * g[i - 1] - g[i - 2]) / (12.0 * h * h);
    worst = std::min(worst, d2 + c * g[i]);
  }
  return worst;
}

}  // namespace

ConvexityCheck check_convexity_equivalence(std::span<const double> f, double a, double b, double k) {
  if (f.size() < kMinSamples) fail(ErrorCode::GridTooCoarse, "convexity check needs at least 64 samples");
  if (!(b > a)) fail(ErrorCode::InvalidArgument, "interval must satisfy a < b");
  const std::size_t m = f.size();
  const double h = (b - a) / static_cast<double>(m - 1);
  const double band = tolerance_band(max_abs(f) * (1.0 + std::abs(k)));

  ConvexityCheck out;
  out.ode_margin = ode_margin(f, h, k);
  out.ode_holds = out.ode_margin >= -band;

  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      const double theta = h * static_cast<double>(j - i);
      for (std::size_t p = i + 1; p < j; ++p) {
        const double t = static_cast<double>(p - i) / static_cast<double>(j - i);
        const ExtendedReal s0 = sigma(k, 1.0 - t, theta);
        const ExtendedReal s1 = sigma(k, t, theta);
        if (s0.infinite || s1.infinite) continue;
        worst = std::min(worst, s0.value * f[i] + s1.value * f[j] - f[p]);
      }
    }
  }
  out.sigma_margin = std::isfinite(worst) ? worst : 0.0;
  out.sigma_holds = out.sigma_margin >= -band;
  return out;
}

MixedDistortionCheck check_mixed_distortion(std::span<const double> f_par, std::span<const double> f_perp,
                                            double a, double b, double k1, double n1, double k2, double n2) {
  if (f_par.size() != f_perp.size()) fail(ErrorCode::InvalidArgument, "factor grids differ in size");
  if (f_par.size() < kMinSamples) fail(ErrorCode::GridTooCoarse, "mixed distortion check needs at least 64 samples");
  if (!(n1 > 0.0) || !(n2 > 0.0)) fail(ErrorCode::InvalidDimensionParam, "n1 and n2 must be positive");
  const std::size_t m = f_par.size();
  const double h = (b - a) / static_cast<double>(m - 1);
  const double N = n1 + n2;

  std::vector<double> r_par(m), r_perp(m), f_root(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(f_par[i] > 0.0) || !(f_perp[i] > 0.0))
      fail(ErrorCode::PreconditionFailed, "factors must be positive on the grid");
    r_par[i] = std::pow(f_par[i], 1.0 / n1);
    r_perp[i] = std::pow(f_perp[i], 1.0 / n2);
    f_root[i] = std::pow(f_par[i] * f_perp[i], 1.0 / N);
  }
  // The factor conditions are concavity-type: (g'' + c g) <= 0.
  auto neg = [](std::vector<double> v) {
    for (double& x : v) x = -x;
    return v;
  };
  const double m_par = ode_margin(neg(r_par), h, k1 / n1);
  const double m_perp = ode_margin(neg(r_perp), h, k2 / n2);
  if (m_par < -tolerance_band(max_abs(r_par) * (1.0 + std::abs(k1 / n1))))
    fail(ErrorCode::PreconditionFailed, "parallel factor violates its concavity condition (margin " +
                                            std::to_string(m_par) + ")");
  if (m_perp < -tolerance_band(max_abs(r_perp) * (1.0 + std::abs(k2 / n2))))
    fail(ErrorCode::PreconditionFailed, "perpendicular factor violates its concavity condition (margin " +
                                            std::to_string(m_perp) + ")");

  MixedDistortionCheck out;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      const double theta = h * static_cast<double>(j - i);
      for (std::size_t p = i + 1; p < j; ++p) {
        const double t = static_cast<double>(p - i) / static_cast<double>(j - i);
        const ExtendedReal a1 = sigma(k1 / n1, 1.0 - t, theta), a2 = sigma(k2 / n2, 1.0 - t, theta);
        const ExtendedReal b1 = sigma(k1 / n1, t, theta), b2 = sigma(k2 / n2, t, theta);
        if (a1.infinite || a2.infinite || b1.infinite || b2.infinite) {
          ++out.skipped_infinite;
          continue;
        }
        const double rhs = std::pow(a1.value, n1 / N) * std::pow(a2.value, n2 / N) * f_root[i] +
                           std::pow(b1.value, n1 / N) * std::pow(b2.value, n2 / N) * f_root[j];
        worst = std::min(worst, f_root[p] - rhs);
      }
    }
  }
  out.margin = std::isfinite(worst) ? worst : 0.0;
  out.holds = out.margin >= -tolerance_band(max_abs(f_root));
  return out;
}

}  // namespace ltbm
