#pragma once

// Adaptive Dormand-Prince 5(4) integration with forced stops at output times.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

namespace ltbm {

struct OdeSettings {
  double rtol = 1e-10;
  double atol = 1e-10;
  int max_steps = 200000;
};

using OdeState = Eigen::VectorXd;
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dy)>;

/// Integrates from t0 through each entry of `outputs` (monotone in one
/// direction) and returns the state at every output time. Throws
/// StepFailure if the step size collapses or the step budget runs out.
std::vector<OdeState> integrate(const OdeRhs& rhs, double t0, const OdeState& y0,
                                std::span<const double> outputs, const OdeSettings& settings = {});

}  // namespace ltbm
