#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "ltbm/coupling.hpp"
#include "ltbm/errors.hpp"
#include "support.hpp"

using namespace ltbm;
using namespace ltbm::test;

namespace {

double flat_ell(const Vec& x, const Vec& y) {
  const Vec d = y - x;
  const double s = d[0] * d[0] - d.tail(d.size() - 1).squaredNorm();
  return d[0] > 0.0 && s > 0.0 ? std::sqrt(s) : -std::numeric_limits<double>::infinity();
}

// Best sum of ell^q over all m! permutations, by recursion on the row.
void brute(const Eigen::MatrixXd& ell, double q, int i, std::vector<char>& used, double acc, double& best) {
  const int m = static_cast<int>(ell.rows());
  if (i == m) {
    best = std::max(best, acc);
    return;
  }
  for (int j = 0; j < m; ++j) {
    if (used[static_cast<std::size_t>(j)] || !(ell(i, j) > 0.0)) continue;
    used[static_cast<std::size_t>(j)] = 1;
    brute(ell, q, i + 1, used, acc + std::pow(ell(i, j), q), best);
    used[static_cast<std::size_t>(j)] = 0;
  }
}

double brute_best(const Eigen::MatrixXd& ell, double q) {
  std::vector<char> used(static_cast<std::size_t>(ell.rows()), 0);
  double best = -std::numeric_limits<double>::infinity();
  brute(ell, q, 0, used, 0.0, best);
  return best;
}

std::vector<Vec> atoms(std::mt19937_64& rng, int m, double t0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec> out;
  for (int i = 0; i < m; ++i) out.push_back(vec({t0 + 0.5 * u(rng), u(rng)}));
  return out;
}

}  // namespace

TEST_CASE("single atoms give the separation itself") {
  const auto mk = minkowski(2);
  for (double q : {0.1, 0.5, 0.9}) {
    const auto cp = lw_distance_discrete(mk, {vec({0, 0})}, {vec({2, 1})}, q);
    CHECK(!cp.minus_infinity);
    CHECK(cp.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("crossing pairing spacelike picks the parallel one") {
  const auto mk = minkowski(2);
  const std::vector<Vec> mu = {vec({0, 0}), vec({0, 3})}, nu = {vec({1, 0}), vec({1, 3})};
  const auto cp = lw_distance_discrete(mk, mu, nu, 0.5);
  REQUIRE(!cp.minus_infinity);
  CHECK(cp.coupling == std::vector<int>{0, 1});
  CHECK(cp.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("all pairs spacelike is minus infinity") {
  const auto mk = minkowski(2);
  const auto cp = lw_distance_discrete(mk, {vec({0, 0}), vec({0, 1})}, {vec({0, 2.5}), vec({0.1, 3.5})}, 0.5);
  CHECK(cp.minus_infinity);
  CHECK(cp.coupling.empty());
}

TEST_CASE("coupling matches enumeration on random instances") {
  const auto mk = minkowski(2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uq(0.05, 0.95);
  int infeasible = 0;
  for (int k = 0; k < 120; ++k) {
    const int m = 1 + k % 6;
    const auto mu = atoms(rng, m, 0.0), nu = atoms(rng, m, k % 3 == 0 ? 0.3 : 1.2);
    const double q = uq(rng);
    const auto cp = lw_distance_discrete(mk, mu, nu, q);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double e = flat_ell(mu[static_cast<std::size_t>(i)], nu[static_cast<std::size_t>(j)]);
        if (std::isfinite(e)) CHECK(std::abs(cp.ell(i, j) - e) < 1e-12);
        else CHECK(!std::isfinite(cp.ell(i, j)));
      }
    const double best = brute_best(cp.ell, q);
    if (!std::isfinite(best)) {
      ++infeasible;
      CHECK(cp.minus_infinity);
      continue;
    }
    REQUIRE(!cp.minus_infinity);
    CHECK(cp.objective == best);
    // marginals: the coupling is a permutation
    std::vector<int> sorted = cp.coupling;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < m; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
    const auto h = solve_coupling(cp.ell, q, AssignmentSolver::Hungarian);
    CHECK(h.objective == doctest::Approx(best).epsilon(1e-13));
  }
  CHECK(infeasible > 0);
}

TEST_CASE("assignment solver on nine and ten atoms") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int m : {9, 10}) {
    Eigen::MatrixXd ell(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) ell(i, j) = u(rng) < 0.3 ? -std::numeric_limits<double>::infinity() : u(rng);
    const auto cp = solve_coupling(ell, 0.4);
    CHECK(cp.objective == doctest::Approx(brute_best(ell, 0.4)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(solve_coupling(Eigen::MatrixXd::Ones(11, 11), 0.5), Error);
  try {
    solve_coupling(Eigen::MatrixXd::Ones(11, 11), 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyAtoms);
  }
  CHECK_THROWS_AS(solve_coupling(Eigen::MatrixXd::Ones(2, 2), 1.0), Error);
}
