#include "ltbm/ode.hpp"

#include <algorithm>
#include <cmath>

#include "ltbm/errors.hpp"

namespace ltbm {

namespace {

// Dormand-Prince coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

std::vector<OdeState> integrate(const OdeRhs& rhs, double t0, const OdeState& y0,
                                std::span<const double> outputs, const OdeSettings& s) {
  std::vector<OdeState> result;
  result.reserve(outputs.size());
  const Eigen::Index dim = y0.size();
  OdeState y = y0;
  double t = t0;
  OdeState k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim), ynew(dim);
  rhs(t, y, k1);
  double h = 0.0;
  int steps = 0;

  for (double target : outputs) {
    const double span = target - t;
    if (span == 0.0) {
      result.push_back(y);
      continue;
    }
    const double dir = span > 0 ? 1.0 : -1.0;
    if (h == 0.0 || h * dir <= 0.0) {
      // Initial guess from the derivative scale.
      const double d0 = y.cwiseAbs().maxCoeff() + 1.0;
      const double d1 = k1.cwiseAbs().maxCoeff() + 1e-12;
      h = dir * std::min(std::abs(span), 0.01 * d0 / d1);
    }
    while ((target - t) * dir > 0.0) {
      if (++steps > s.max_steps) fail(ErrorCode::StepFailure, "ODE step budget exhausted");
      bool last = false;
      if ((t + h - target) * dir >= 0.0) {
        h = target - t;
        last = true;
      }
      tmp = y + h * a21 * k1;
      rhs(t + c2 * h, tmp, k2);
      tmp = y + h * (a31 * k1 + a32 * k2);
      rhs(t + c3 * h, tmp, k3);
      tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * h, tmp, k4);
      tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * h, tmp, k5);
      tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + h, tmp, k6);
      ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(t + h, ynew, k7);

      double err = 0.0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = s.atol + s.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err = std::max(err, std::abs(e) / sc);
      }
      if (!std::isfinite(err)) fail(ErrorCode::StepFailure, "non-finite ODE state");
      if (err <= 1.0) {
        t = last ? target : t + h;
        y = ynew;
        k1 = k7;  // first-same-as-last
        const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
        if (!last) h *= grow;
        else h = dir * std::max(std::abs(h), std::abs(h) * grow);
      } else {
        h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
      }
      if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
        fail(ErrorCode::StepFailure, "ODE step size underflow");
    }
    result.push_back(y);
  }
  return result;
}

}  // namespace ltbm
