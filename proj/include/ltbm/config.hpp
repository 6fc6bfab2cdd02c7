#pragma once

// Run configuration: an INI file with [spacetime], [numerics] and [task]
// sections. Every key is known in advance; anything else is a Config error.

#include <cstdint>
#include <string>
#include <vector>

#include "ltbm/geodesics.hpp"
#include "ltbm/geometry.hpp"
#include "ltbm/tbm.hpp"

namespace ltbm {

struct SpacetimeConfig {
  std::string catalog;               // empty: explicit expressions
  int n = 0;
  std::vector<std::string> metric;   // row-major n*n, mirrored from the upper triangle
  std::string psi = "0";
  double N = 0.0;
  std::vector<double> lo, hi;        // chart bounds
};

struct NumericsConfig {
  double fd_step = 1e-5;
  bool richardson = true;
  double ode_tolerance = 1e-10;  // geodesic and separation commands
  double voxel_fraction = 1.0 / 64;
  std::size_t random_pairs = 0;
  int matched_resolution = 0;
  std::size_t theta_pairs = 4096;
  std::size_t containment_points = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  double tolerance = 0.0;
  int samples = 65;
};

struct TaskConfig {
  Vec x0, v0, y;  // empty when absent
  double K = 0.0;
  double epsilon = 0.4;
  double lambda = 0.1;
  double delta = 0.0;  // 0: lambda^3
  std::vector<double> t{0.5};
  double q = 0.5;
  std::vector<double> theta{0.5, 1.0};
  std::string region_b = "transport";  // or "shift"
  Vec shift;
  std::vector<Vec> mu, nu;
  Vec box_lo, box_hi;
  double rapidity = 1.0;
  std::size_t scan_points = 64;
  int lambda_levels = 5;
};

struct RunConfig {
  std::string origin;
  SpacetimeConfig spacetime;
  NumericsConfig numerics;
  TaskConfig task;
  WeightedSpacetime st;  // built and validated at load

  PipelineOptions pipeline() const;
  LogOptions log_options() const;
  double effective_delta() const { return task.delta > 0.0 ? task.delta : task.lambda * task.lambda * task.lambda; }
};

/// Catalog names: minkowski2, minkowski3, weighted_minkowski2,
/// weighted_minkowski3, warped2.
std::vector<std::string> catalog_names();

/// Config errors name the offending key as section.key.
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
RunConfig load_config(const std::string& path);

}  // namespace ltbm
