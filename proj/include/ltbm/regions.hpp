#pragma once

// Compact regions (eigen-cubes, their images, geodesic interpolants, voxel
// sets) and their m-measures by voxel rasterization.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ltbm/geodesics.hpp"
#include "ltbm/jacobi.hpp"

namespace ltbm {

/// Axis-aligned grid of cells in chart coordinates with an occupancy mask.
struct VoxelGrid {
  int n = 0;
  Vec origin;  // lower corner
  Vec cell;    // side lengths
  std::array<int, kMaxDim> dims{};
  std::vector<std::uint8_t> occupied;

  /// Grid covering [lo, hi] with cells as close to h as an integer count
  /// allows, plus `pad` extra cells on every side.
  static VoxelGrid fitted(const Vec& lo, const Vec& hi, double h, int pad);

  std::size_t size() const;
  Vec center(std::size_t index) const;
  /// Cell containing p; points on the far boundary map to the last cell.
  /// Returns -1 outside the grid.
  long index_of(const Vec& p) const;
  double cell_volume() const;
  std::size_t count() const;
};

struct VolumeEstimate {
  double value = 0.0;
  double voxel_side = 0.0;
  std::size_t voxel_count = 0;
  std::vector<double> history;  // values at h, 2h, 4h
  double refinement_gap = 0.0;  // |value(h) - value(2h)|
  bool monotone = true;         // successive gaps shrink
};

struct RegionSpec {
  enum class Kind { EigenCube, Image, Interpolant, VoxelSet };

  Kind kind = Kind::EigenCube;
  int n = 0;
  Vec anchor;
  Mat spans;         // coordinate span vectors of the cube, columns
  double side = 0.0;
  std::string generator;

  /// Member point at parameter s in [0,1]^n (eigen-cubes and images).
  std::function<Vec(const Vec&)> param;

  /// Interpolants: hit bitmap at half the voxel side, hit bounding box and a
  /// sample of the hits (all corner pairs plus a strided subset).
  /// Voxel sets: the occupied cells.
  std::shared_ptr<const VoxelGrid> voxels;
  std::shared_ptr<const std::vector<Vec>> points;
  Vec box_lo, box_hi;

  /// Pair statistics for interpolants.
  std::size_t pairs_used = 0;
  std::size_t pairs_skipped = 0;   // not timelike
  std::size_t pairs_outside = 0;   // random hits beyond the structured bounding box
  std::size_t corner_points = 0;   // leading entries of `points` that come from corner pairs

  bool analytic() const { return static_cast<bool>(param); }
  /// Images of the 2^n parameter corners.
  std::vector<Vec> corners() const;
};

const char* to_string(RegionSpec::Kind k);

/// Cube of side delta centered at 0 in the eigenbasis of the tidal operator
/// of v0, pushed forward by exp_{x0}.
RegionSpec eigen_cube(const WeightedSpacetime& st, const Vec& x0, const Vec& v0, double delta);

using PointMap = std::function<Vec(const Vec&)>;

RegionSpec map_region(const RegionSpec& A, PointMap map, std::string description);

struct SampleCounts {
  int matched_resolution = 0;    // matched-parameter grid points per axis (0: automatic)
  std::size_t random_pairs = 4096;
  std::uint64_t seed = 1;
  int threads = 1;
  double voxel_side = 0.0;       // 0: a 64th of the interpolant's parameter scale
  std::size_t keep_points = 32768;
};

/// {F_t(x, y)} over sampled timelike pairs of A x B. A point is a member
/// when all 2^n half-side cells around it received a hit.
RegionSpec interpolant_region(const WeightedSpacetime& st, const RegionSpec& A, const RegionSpec& B, double t,
                              const SampleCounts& counts);

/// Occupancy of R on the cells of `grid` (existing mask is replaced).
void voxelize(const WeightedSpacetime& st, const RegionSpec& R, VoxelGrid& grid, int threads = 1);

/// Grid fitted to R's bounding box.
VoxelGrid region_grid(const RegionSpec& R, double h);

/// Sum of measure density times cell volume over the occupied cells.
double grid_measure(const WeightedSpacetime& st, const VoxelGrid& grid);

VolumeEstimate measure(const WeightedSpacetime& st, const RegionSpec& R, double voxel_side, int threads = 1);

/// Voxel dilation by a Euclidean ball in chart coordinates.
RegionSpec fatten(const WeightedSpacetime& st, const RegionSpec& R, double radius, double voxel_side,
                  int threads = 1);

struct ThetaStatistic {
  double value = 0.0;
  double inf = 0.0;
  double sup = 0.0;
  std::size_t samples = 0;
  std::size_t nonpositive = 0;  // pairs with l+ <= 0
};

/// inf (K >= 0) or sup (K < 0) of l+ over corner pairs and quasi-random pairs.
ThetaStatistic theta_statistic(const WeightedSpacetime& st, const RegionSpec& A, const RegionSpec& B, double K,
                               std::size_t random_pairs, std::uint64_t seed, int threads = 1);

/// Pre-image parameter of p under R.param (Newton); false when p is not a
/// member.
bool pull_back(const RegionSpec& R, const Vec& p, Vec& s);

/// Coordinate bounding box (analytic regions: sampled on a 9^n parameter grid).
void bounding_box(const RegionSpec& R, Vec& lo, Vec& hi);

/// Euclidean chart distance from p to an analytic region; 0 for members.
double distance_to_region(const RegionSpec& R, const Vec& p);

}  // namespace ltbm
