#pragma once

#include <string>
#include <vector>

#include "ltbm/geometry.hpp"

namespace ltbm::test {

// Metric given as the upper triangle, row by row.
inline WeightedSpacetime make_spacetime(int n, const std::vector<std::string>& upper, const std::string& psi,
                                        double N, double lo, double hi) {
  std::vector<Expr> g(static_cast<std::size_t>(n * n));
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      g[static_cast<std::size_t>(i * n + j)] = parse_expr(upper.at(k++), n);
      g[static_cast<std::size_t>(j * n + i)] = g[static_cast<std::size_t>(i * n + j)];
    }
  }
  ChartDomain chart{std::vector<double>(static_cast<std::size_t>(n), lo),
                    std::vector<double>(static_cast<std::size_t>(n), hi)};
  return WeightedSpacetime::create(n, std::move(g), parse_expr(psi, n), N, chart);
}

inline WeightedSpacetime minkowski(int n) {
  std::vector<std::string> up;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) up.push_back(i != j ? "0" : (i == 0 ? "1" : "-1"));
  return make_spacetime(n, up, "0", n, -4, 4);
}

inline WeightedSpacetime warped2() { return make_spacetime(2, {"1", "0", "-exp(2*x0)"}, "0", 2, -2, 2); }

inline WeightedSpacetime weighted_minkowski2(const std::string& psi = "x0", double N = 3) {
  return make_spacetime(2, {"1", "0", "-1"}, psi, N, -4, 4);
}

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace ltbm::test
