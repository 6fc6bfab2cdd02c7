#pragma once

#include <Eigen/Dense>

namespace ltbm {

// Spacetime dimensions handled by the toolkit. Fixed upper bound keeps the
// small per-point matrices off the heap.
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

}  // namespace ltbm
