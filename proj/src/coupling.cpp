#include "ltbm/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ltbm/errors.hpp"
#include "ltbm/geodesics.hpp"

namespace ltbm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double powered(double l, double q) { return l > 0.0 ? std::pow(l, q) : kNegInf; }

std::vector<int> exhaustive(const Eigen::MatrixXd& ell, double q) {
  const int m = static_cast<int>(ell.rows());
  std::vector<int> perm(static_cast<std::size_t>(m)), best;
  std::iota(perm.begin(), perm.end(), 0);
  double best_value = kNegInf;
  do {
    const double v = coupling_objective(ell, perm, q);
    if (v > best_value) {
      best_value = v;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// O(m^3) potentials method on a square cost matrix; forbidden pairs carry a
// penalty larger than any feasible total so they are used only when forced.
std::vector<int> hungarian(const Eigen::MatrixXd& ell, double q) {
  const int m = static_cast<int>(ell.rows());
  Eigen::MatrixXd w(m, m);
  double top = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      w(i, j) = powered(ell(i, j), q);
      if (std::isfinite(w(i, j))) top = std::max(top, w(i, j));
    }
  const double penalty = 4.0 * (m + 1) * (top + 1.0);
  const auto cost = [&](int i, int j) { return std::isfinite(w(i, j)) ? -w(i, j) : penalty; };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(m + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(p[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) perm[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return perm;
}

}  // namespace

double coupling_objective(const Eigen::MatrixXd& ell, const std::vector<int>& perm, double q) {
  double s = 0.0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const double w = powered(ell(static_cast<Eigen::Index>(i), perm[i]), q);
    if (!std::isfinite(w)) return kNegInf;
    s += w;
  }
  return s;
}

CouplingProblem solve_coupling(Eigen::MatrixXd ell, double q, AssignmentSolver solver) {
  if (ell.rows() != ell.cols()) fail(ErrorCode::InvalidArgument, "atom counts differ");
  if (ell.rows() == 0) fail(ErrorCode::InvalidArgument, "no atoms");
  if (ell.rows() > kMaxAtoms) fail(ErrorCode::TooManyAtoms, "at most 10 atoms per measure");
  if (!(q > 0.0 && q < 1.0)) fail(ErrorCode::InvalidArgument, "q must lie in (0, 1)");
  if (solver == AssignmentSolver::Automatic)
    solver = ell.rows() <= 8 ? AssignmentSolver::Exhaustive : AssignmentSolver::Hungarian;

  CouplingProblem cp;
  cp.q = q;
  cp.ell = std::move(ell);
  std::vector<int> perm = solver == AssignmentSolver::Exhaustive ? exhaustive(cp.ell, q) : hungarian(cp.ell, q);
  const double obj = perm.empty() ? kNegInf : coupling_objective(cp.ell, perm, q);
  if (std::isfinite(obj)) {
    cp.coupling = std::move(perm);
    cp.minus_infinity = false;
    cp.objective = obj;
    cp.value = std::pow(obj / static_cast<double>(cp.ell.rows()), 1.0 / q);
  }
  return cp;
}

CouplingProblem lw_distance_discrete(const WeightedSpacetime& st, const std::vector<Vec>& mu,
                                     const std::vector<Vec>& nu, double q, AssignmentSolver solver) {
  if (mu.size() != nu.size()) fail(ErrorCode::InvalidArgument, "atom counts differ");
  if (mu.size() > static_cast<std::size_t>(kMaxAtoms)) fail(ErrorCode::TooManyAtoms, "at most 10 atoms per measure");
  const auto m = static_cast<Eigen::Index>(mu.size());
  Eigen::MatrixXd ell(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const SeparationValue s = time_separation(st, mu[static_cast<std::size_t>(i)], nu[static_cast<std::size_t>(j)]);
      ell(i, j) = s.minus_infinity || s.value <= 0.0 ? kNegInf : s.value;
    }
  CouplingProblem cp = solve_coupling(std::move(ell), q, solver);
  cp.mu = mu;
  cp.nu = nu;
  return cp;
}

}  // namespace ltbm
