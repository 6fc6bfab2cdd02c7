#pragma once

// Discrete q-Lorentz-Wasserstein time separation between uniform measures
// with equal atom counts.

#include <vector>

#include "ltbm/geometry.hpp"

namespace ltbm {

constexpr int kMaxAtoms = 10;

enum class AssignmentSolver { Automatic, Exhaustive, Hungarian };

struct CouplingProblem {
  std::vector<Vec> mu, nu;
  double q = 0.5;
  Eigen::MatrixXd ell;                    // ell(i, j) = l(mu_i, nu_j); -inf where not timelike
  std::vector<int> coupling;  // mu_i -> nu_{coupling[i]}, empty when infeasible
  bool minus_infinity = true;
  double value = 0.0;         // l_q when finite
  double objective = 0.0;     // sum of l^q over the coupling
};

/// l^q summed over a permutation, -inf if any pair is not timelike.
double coupling_objective(const Eigen::MatrixXd& ell, const std::vector<int>& perm, double q);

/// Optimal permutation for a precomputed matrix. TooManyAtoms above
/// kMaxAtoms, InvalidArgument on non-square input or q outside (0, 1).
CouplingProblem solve_coupling(Eigen::MatrixXd ell, double q, AssignmentSolver solver = AssignmentSolver::Automatic);

CouplingProblem lw_distance_discrete(const WeightedSpacetime& st, const std::vector<Vec>& mu,
                                     const std::vector<Vec>& nu, double q,
                                     AssignmentSolver solver = AssignmentSolver::Automatic);

}  // namespace ltbm
