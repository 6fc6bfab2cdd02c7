#include "ltbm/regions.hpp"

#include <algorithm>
#include <cmath>

#include "ltbm/errors.hpp"
#include "ltbm/sampling.hpp"

namespace ltbm {

// ---------------------------------------------------------------- grids

VoxelGrid VoxelGrid::fitted(const Vec& lo, const Vec& hi, double h, int pad) {
  const int n = static_cast<int>(lo.size());
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "voxel side must be positive");
  VoxelGrid g;
  g.n = n;
  g.origin = Vec(n);
  g.cell = Vec(n);
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) {
    const double extent = hi[a] - lo[a];
    if (!(extent > 0.0)) fail(ErrorCode::EmptyRegion, "region has no interior (zero extent)");
    const int m = std::max(1, static_cast<int>(std::lround(extent / h)));
    g.cell[a] = extent / m;
    g.dims[static_cast<std::size_t>(a)] = m + 2 * pad;
    g.origin[a] = lo[a] - pad * g.cell[a];
    total *= static_cast<std::size_t>(g.dims[static_cast<std::size_t>(a)]);
  }
  if (total > 400'000'000ULL) fail(ErrorCode::InvalidArgument, "voxel grid too large; increase voxel_side");
  g.occupied.assign(total, 0);
  return g;
}

std::size_t VoxelGrid::size() const { return occupied.size(); }

Vec VoxelGrid::center(std::size_t index) const {
  Vec c(n);
  for (int a = 0; a < n; ++a) {
    const auto d = static_cast<std::size_t>(dims[static_cast<std::size_t>(a)]);
    c[a] = origin[a] + (static_cast<double>(index % d) + 0.5) * cell[a];
    index /= d;
  }
  return c;
}

long VoxelGrid::index_of(const Vec& p) const {
  long idx = 0, stride = 1;
  for (int a = 0; a < n; ++a) {
    const int d = dims[static_cast<std::size_t>(a)];
    const double u = (p[a] - origin[a]) / cell[a];
    long i = static_cast<long>(std::floor(u));
    if (i == d && u <= d + 1e-9) i = d - 1;
    if (i == -1 && u >= -1e-9) i = 0;
    if (i < 0 || i >= d) return -1;
    idx += i * stride;
    stride *= d;
  }
  return idx;
}

double VoxelGrid::cell_volume() const { return cell.prod(); }

std::size_t VoxelGrid::count() const {
  return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

const char* to_string(RegionSpec::Kind k) {
  switch (k) {
    case RegionSpec::Kind::EigenCube: return "eigen_cube";
    case RegionSpec::Kind::Image: return "image";
    case RegionSpec::Kind::Interpolant: return "interpolant";
    case RegionSpec::Kind::VoxelSet: return "voxel_set";
  }
  return "?";
}

namespace {

Vec corner_param(int n, unsigned mask) {
  Vec s(n);
  for (int a = 0; a < n; ++a) s[a] = (mask >> a) & 1U ? 1.0 : 0.0;
  return s;
}

Mat param_jacobian(const RegionSpec& R, const Vec& s) {
  const int n = R.n;
  Mat J(n, n);
  const double h = 1e-5;
  for (int a = 0; a < n; ++a) {
    Vec p = s, m = s;
    p[a] += h;
    m[a] -= h;
    J.col(a) = (R.param(p) - R.param(m)) / (2 * h);
  }
  return J;
}

struct Chord {
  Vec p_mid;
  Mat Jinv;
};

Chord make_chord(const RegionSpec& R) {
  const Vec mid = Vec::Constant(R.n, 0.5);
  const Eigen::FullPivLU<Mat> lu(param_jacobian(R, mid));
  if (!lu.isInvertible()) fail(ErrorCode::EmptyRegion, "region parametrization is degenerate");
  return {R.param(mid), lu.inverse()};
}

bool pull_back_chord(const RegionSpec& R, const Chord& c, const Vec& p, Vec& s) {
  const int n = R.n;
  s = Vec::Constant(n, 0.5) + c.Jinv * (p - c.p_mid);
  try {
    for (int it = 0; it < 60; ++it) {
      if ((s.array() < -0.5).any() || (s.array() > 1.5).any()) return false;
      const Vec step = c.Jinv * (R.param(s) - p);
      s -= step;
      if (step.cwiseAbs().maxCoeff() < 1e-13) {
        return (s.array() >= -1e-12).all() && (s.array() <= 1.0 + 1e-12).all();
      }
    }
    // Fall back to full Newton for strongly curved parametrizations.
    for (int it = 0; it < 20; ++it) {
      const Eigen::FullPivLU<Mat> lu(param_jacobian(R, s));
      if (!lu.isInvertible()) return false;
      const Vec step = lu.solve(R.param(s) - p);
      s -= step;
      if (step.cwiseAbs().maxCoeff() < 1e-13) {
        return (s.array() >= -1e-12).all() && (s.array() <= 1.0 + 1e-12).all();
      }
      if ((s.array() < -0.5).any() || (s.array() > 1.5).any()) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return false;
}

}  // namespace

void bounding_box(const RegionSpec& R, Vec& lo, Vec& hi) {
  const int n = R.n;
  lo = Vec::Constant(n, std::numeric_limits<double>::infinity());
  hi = -lo;
  auto take = [&](const Vec& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  if (R.analytic()) {
    const int k = 8;
    int total = 1;
    for (int a = 0; a < n; ++a) total *= k + 1;
    for (int idx = 0; idx < total; ++idx) {
      Vec s(n);
      int r = idx;
      for (int a = 0; a < n; ++a) {
        s[a] = static_cast<double>(r % (k + 1)) / k;
        r /= k + 1;
      }
      take(R.param(s));
    }
  } else if (R.kind == RegionSpec::Kind::Interpolant) {
    take(R.box_lo);
    take(R.box_hi);
  } else if (R.voxels) {
    const VoxelGrid& g = *R.voxels;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g.occupied[i]) continue;
      const Vec c = g.center(i);
      take(c - 0.5 * g.cell);
      take(c + 0.5 * g.cell);
    }
  }
  if (!(lo.array() <= hi.array()).all()) fail(ErrorCode::EmptyRegion, "region is empty");
}

std::vector<Vec> RegionSpec::corners() const {
  std::vector<Vec> out;
  if (!param) return out;
  for (unsigned mask = 0; mask < (1U << n); ++mask) out.push_back(param(corner_param(n, mask)));
  return out;
}

bool pull_back(const RegionSpec& R, const Vec& p, Vec& s) {
  if (!R.analytic()) fail(ErrorCode::InvalidArgument, "pull_back needs an analytic region");
  return pull_back_chord(R, make_chord(R), p, s);
}

double distance_to_region(const RegionSpec& R, const Vec& p) {
  if (!R.analytic()) fail(ErrorCode::InvalidArgument, "distance needs an analytic region");
  const Chord chord = make_chord(R);
  Vec s;
  if (pull_back_chord(R, chord, p, s)) return 0.0;
  // projected Gauss-Newton on the parameter box
  s = (Vec::Constant(R.n, 0.5) + chord.Jinv * (p - chord.p_mid)).cwiseMax(0.0).cwiseMin(1.0);
  Vec r = R.param(s) - p;
  double best = r.norm();
  for (int it = 0; it < 25; ++it) {
    const Mat J = param_jacobian(R, s);
    // least squares over the parameters not pinned to a face
    std::array<bool, kMaxDim> pinned{};
    Vec step = Vec::Zero(R.n);
    for (int pass = 0; pass <= R.n; ++pass) {
      std::vector<int> cols;
      for (int a = 0; a < R.n; ++a)
        if (!pinned[static_cast<std::size_t>(a)]) cols.push_back(a);
      step.setZero();
      if (cols.empty()) break;
      Mat Jf(R.n, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) Jf.col(static_cast<Eigen::Index>(c)) = J.col(cols[c]);
      const Eigen::VectorXd sub = Jf.colPivHouseholderQr().solve(r);
      for (std::size_t c = 0; c < cols.size(); ++c) step[cols[c]] = sub[static_cast<Eigen::Index>(c)];
      bool changed = false;
      for (int a = 0; a < R.n; ++a) {
        const bool out = (s[a] <= 0.0 && step[a] > 0.0) || (s[a] >= 1.0 && step[a] < 0.0);
        if (out && !pinned[static_cast<std::size_t>(a)]) {
          pinned[static_cast<std::size_t>(a)] = true;
          changed = true;
        }
      }
      if (!changed) break;
    }
    double scale = 1.0;
    bool improved = false;
    for (int k = 0; k < 20; ++k, scale *= 0.5) {
      const Vec trial = (s - scale * step).cwiseMax(0.0).cwiseMin(1.0);
      const Vec rt = R.param(trial) - p;
      if (rt.norm() < best) {
        improved = best - rt.norm() > 1e-15 * (1.0 + best);
        s = trial;
        r = rt;
        best = rt.norm();
        break;
      }
    }
    if (!improved) break;
  }
  return best;
}

// ---------------------------------------------------------------- regions

RegionSpec eigen_cube(const WeightedSpacetime& st, const Vec& x0, const Vec& v0, double delta) {
  if (!(delta >= 0.0)) fail(ErrorCode::InvalidArgument, "cube side must be non-negative");
  const Mat g = metric_at(st, as_span(x0));
  if (std::abs(v0.dot(g * v0) - 1.0) > 1e-8) fail(ErrorCode::InvalidArgument, "v0 must be unit timelike");
  const TidalOperator op = tidal_operator(st, x0, v0);
  RegionSpec R;
  R.kind = RegionSpec::Kind::EigenCube;
  R.n = st.dim();
  R.anchor = x0;
  R.spans = op.coordinate_eigenvectors;
  R.side = delta;
  R.generator = "exp_x0(Q_delta)";
  const Mat spans = R.spans;
  const WeightedSpacetime* sp = &st;
  R.param = [sp, x0, spans, delta](const Vec& s) {
    const Vec w = delta * (spans * (s - Vec::Constant(s.size(), 0.5)));
    return exp_map(*sp, TangentPoint{x0, w}, 1.0);
  };
  return R;
}

RegionSpec map_region(const RegionSpec& A, PointMap map, std::string description) {
  if (!A.analytic()) fail(ErrorCode::InvalidArgument, "map_region needs an analytic region");
  RegionSpec B = A;
  B.kind = RegionSpec::Kind::Image;
  B.generator = std::move(description);
  B.anchor = map(A.anchor);
  auto inner = A.param;
  B.param = [inner, map](const Vec& s) { return map(inner(s)); };
  return B;
}

RegionSpec interpolant_region(const WeightedSpacetime& st, const RegionSpec& A, const RegionSpec& B, double t,
                              const SampleCounts& counts) {
  if (!A.analytic() || !B.analytic()) fail(ErrorCode::InvalidArgument, "interpolant needs analytic endpoints");
  const int n = A.n;
  const std::vector<Vec> ca = A.corners(), cb = B.corners();
  const std::size_t nc = ca.size() * cb.size();

  const Vec mid = Vec::Constant(n, 0.5);
  const Mat J = (1.0 - t) * param_jacobian(A, mid) + t * param_jacobian(B, mid);
  double c = 0.0;
  for (int a = 0; a < n; ++a) c = std::max(c, J.col(a).cwiseAbs().maxCoeff());
  const double h = counts.voxel_side > 0 ? counts.voxel_side : c / 64.0;
  int r = counts.matched_resolution;
  // matched spacing of a quarter voxel: every half-side cell gets hits
  if (r <= 0) r = static_cast<int>(std::ceil(4.0 * c / h)) + 1;
  r = std::max(r, 2);
  std::size_t nm = 1;
  for (int a = 0; a < n; ++a) nm *= static_cast<std::size_t>(r);

  std::vector<double> uv;  // random pairs, 2n coordinates each
  {
    QuasiRandom qr(2 * n, counts.seed);
    uv.reserve(counts.random_pairs * static_cast<std::size_t>(2 * n));
    for (std::size_t k = 0; k < counts.random_pairs; ++k) {
      std::vector<double> u = qr.next();
      if (k % 2 == 1) {
        // push half of the samples toward the faces of the parameter cube
        for (double& x : u) x = 0.5 * (1.0 - std::cos(3.141592653589793 * x));
      }
      uv.insert(uv.end(), u.begin(), u.end());
    }
  }
  const std::size_t structured = nc + nm;
  const std::size_t total = structured + counts.random_pairs;

  // Hit of pair i, or false when the pair is not timelike.
  auto hit = [&](std::size_t i, Vec& out) {
    Vec x, y;
    if (i < nc) {
      x = ca[i / cb.size()];
      y = cb[i % cb.size()];
    } else if (i < structured) {
      std::size_t q = i - nc;
      Vec s(n);
      for (int a = 0; a < n; ++a) {
        s[a] = static_cast<double>(q % static_cast<std::size_t>(r)) / (r - 1);
        q /= static_cast<std::size_t>(r);
      }
      x = A.param(s);
      y = B.param(s);
    } else {
      const double* u = &uv[(i - structured) * static_cast<std::size_t>(2 * n)];
      Vec sa(n), sb(n);
      for (int a = 0; a < n; ++a) {
        sa[a] = u[a];
        sb[a] = u[n + a];
      }
      x = A.param(sa);
      y = B.param(sb);
    }
    const Vec v = log_map(st, x, y);
    const SeparationValue sep = separation_from_log(st, x, v);
    if (sep.minus_infinity || sep.character != CausalCharacter::Timelike) return false;
    out = t == 0.0 ? x : (t == 1.0 ? y : exp_map(st, TangentPoint{x, v}, t));
    return true;
  };

  const int threads = std::max(1, counts.threads);
  const std::size_t blocks = static_cast<std::size_t>(threads);
  auto block_range = [&](std::size_t count, std::size_t b) {
    return std::pair<std::size_t, std::size_t>{count * b / blocks, count * (b + 1) / blocks};
  };

  // Pass 1: bounding box of the structured hits (kept when small).
  const bool cache = structured * static_cast<std::size_t>(n) <= (std::size_t{1} << 22);
  std::vector<double> cached(cache ? structured * static_cast<std::size_t>(n) : 0);
  std::vector<std::uint8_t> cached_ok(cache ? structured : 0);
  std::vector<Vec> blo(blocks, Vec::Constant(n, std::numeric_limits<double>::infinity()));
  std::vector<Vec> bhi(blocks, Vec::Constant(n, -std::numeric_limits<double>::infinity()));
  parallel_for(blocks, threads, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      const auto [lo, hi] = block_range(structured, b);
      Vec p;
      for (std::size_t i = lo; i < hi; ++i) {
        if (!hit(i, p)) continue;
        blo[b] = blo[b].cwiseMin(p);
        bhi[b] = bhi[b].cwiseMax(p);
        if (cache) {
          cached_ok[i] = 1;
          for (int a = 0; a < n; ++a) cached[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] = p[a];
        }
      }
    }
  });
  Vec lo = blo[0], hi = bhi[0];
  for (std::size_t b = 1; b < blocks; ++b) {
    lo = lo.cwiseMin(blo[b]);
    hi = hi.cwiseMax(bhi[b]);
  }
  if (!(lo.array() <= hi.array()).all()) fail(ErrorCode::NonTimelikePair, "no sampled pair is timelike-related");

  // Pass 2: rasterize every hit into per-worker bitmaps at half the voxel side.
  const VoxelGrid proto = VoxelGrid::fitted(lo, hi, 0.5 * h, 0);
  const std::size_t keep_stride = std::max<std::size_t>(1, total / std::max<std::size_t>(1, counts.keep_points));
  std::vector<std::vector<std::uint8_t>> maps(blocks);
  std::vector<std::vector<Vec>> kept(blocks);
  std::vector<std::size_t> used(blocks, 0), outside(blocks, 0), corner_kept(blocks, 0);
  parallel_for(blocks, threads, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      maps[b].assign(proto.size(), 0);
      const auto [first, last] = block_range(total, b);
      Vec p(n);
      for (std::size_t i = first; i < last; ++i) {
        bool ok;
        if (cache && i < structured) {
          ok = cached_ok[i];
          for (int a = 0; a < n && ok; ++a) p[a] = cached[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)];
        } else {
          ok = hit(i, p);
        }
        if (!ok) continue;
        ++used[b];
        const long idx = proto.index_of(p);
        if (idx < 0) {
          ++outside[b];
          continue;
        }
        maps[b][static_cast<std::size_t>(idx)] = 1;
        if (i < nc || i % keep_stride == 0) kept[b].push_back(p);
        corner_kept[b] += i < nc;
      }
    }
  });
  auto bitmap = std::make_shared<VoxelGrid>(proto);
  for (const auto& m : maps)
    for (std::size_t k = 0; k < m.size(); ++k) bitmap->occupied[k] |= m[k];
  auto pts = std::make_shared<std::vector<Vec>>();
  RegionSpec G;
  for (std::size_t b = 0; b < blocks; ++b) {
    pts->insert(pts->end(), kept[b].begin(), kept[b].end());
    G.pairs_used += used[b];
    G.pairs_outside += outside[b];
    G.corner_points += corner_kept[b];
  }
  G.kind = RegionSpec::Kind::Interpolant;
  G.n = n;
  G.anchor = (1.0 - t) * A.anchor + t * B.anchor;
  G.generator = "F_t(A x B), t=" + std::to_string(t);
  G.pairs_skipped = total - G.pairs_used;
  G.box_lo = lo;
  G.box_hi = hi;
  G.voxels = std::move(bitmap);
  G.points = std::move(pts);
  return G;
}

namespace {

bool interpolant_contains(const VoxelGrid& fine, const Vec& c) {
  const int n = fine.n;
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    Vec p = c;
    for (int a = 0; a < n; ++a) p[a] += ((mask >> a) & 1U ? 0.5 : -0.5) * fine.cell[a];
    const long idx = fine.index_of(p);
    if (idx < 0 || !fine.occupied[static_cast<std::size_t>(idx)]) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- measure

void voxelize(const WeightedSpacetime& st, const RegionSpec& R, VoxelGrid& grid, int threads) {
  (void)st;
  std::fill(grid.occupied.begin(), grid.occupied.end(), std::uint8_t{0});
  if (R.analytic()) {
    const Chord chord = make_chord(R);
    parallel_for(grid.size(), threads, [&](std::size_t b, std::size_t e) {
      Vec s;
      for (std::size_t i = b; i < e; ++i) {
        if (pull_back_chord(R, chord, grid.center(i), s)) grid.occupied[i] = 1;
      }
    });
  } else if (R.kind == RegionSpec::Kind::Interpolant) {
    const VoxelGrid& fine = *R.voxels;
    parallel_for(grid.size(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        if (interpolant_contains(fine, grid.center(i))) grid.occupied[i] = 1;
      }
    });
  } else if (R.voxels) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const long idx = R.voxels->index_of(grid.center(i));
      if (idx >= 0 && R.voxels->occupied[static_cast<std::size_t>(idx)]) grid.occupied[i] = 1;
    }
  }
}

VoxelGrid region_grid(const RegionSpec& R, double h) {
  Vec lo, hi;
  bounding_box(R, lo, hi);
  return VoxelGrid::fitted(lo, hi, h, R.analytic() ? 1 : 0);
}

double grid_measure(const WeightedSpacetime& st, const VoxelGrid& grid) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.occupied[i]) sum += measure_density(st, as_span(grid.center(i)));
  }
  return sum * grid.cell_volume();
}

VolumeEstimate measure(const WeightedSpacetime& st, const RegionSpec& R, double voxel_side, int threads) {
  if (!(voxel_side > 0.0)) fail(ErrorCode::InvalidArgument, "voxel side must be positive");
  if (R.kind == RegionSpec::Kind::EigenCube && R.side == 0.0)
    fail(ErrorCode::EmptyRegion, "degenerate cube (side 0)");
  VolumeEstimate est;
  est.voxel_side = voxel_side;
  if (R.kind == RegionSpec::Kind::VoxelSet && R.voxels) {
    est.value = grid_measure(st, *R.voxels);
    est.voxel_count = R.voxels->count();
    est.history = {est.value};
  } else {
    for (int level = 0; level < 3; ++level) {
      VoxelGrid g = region_grid(R, voxel_side * (1 << level));
      voxelize(st, R, g, threads);
      const double v = grid_measure(st, g);
      if (level == 0) est.voxel_count = g.count();
      est.history.push_back(v);
    }
    est.value = est.history[0];
    est.refinement_gap = std::abs(est.history[0] - est.history[1]);
    est.monotone = est.refinement_gap <= std::abs(est.history[1] - est.history[2]) + 1e-9;
  }
  if (est.voxel_count == 0) fail(ErrorCode::EmptyRegion, "no voxel is occupied");
  return est;
}

RegionSpec fatten(const WeightedSpacetime& st, const RegionSpec& R, double radius, double voxel_side, int threads) {
  if (!(radius >= 0.0)) fail(ErrorCode::InvalidArgument, "radius must be non-negative");
  VoxelGrid base = region_grid(R, voxel_side);
  voxelize(st, R, base, threads);
  const int n = base.n;
  int k = 1;
  for (int a = 0; a < n; ++a) k = std::max(k, static_cast<int>(std::ceil(radius / base.cell[a])) + 1);
  VoxelGrid out = base;
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) {
    out.dims[static_cast<std::size_t>(a)] += 2 * k;
    out.origin[a] -= k * base.cell[a];
    total *= static_cast<std::size_t>(out.dims[static_cast<std::size_t>(a)]);
  }
  out.occupied.assign(total, 0);

  // Offsets whose cell centers lie within `radius` of a source cell.
  std::vector<std::array<int, kMaxDim>> offsets;
  int span = 1;
  for (int a = 0; a < n; ++a) span *= 2 * k + 1;
  for (int idx = 0; idx < span; ++idx) {
    std::array<int, kMaxDim> d{};
    int r = idx;
    double dist2 = 0.0;
    for (int a = 0; a < n; ++a) {
      d[static_cast<std::size_t>(a)] = r % (2 * k + 1) - k;
      r /= 2 * k + 1;
      const double gap = std::max(0.0, std::abs(d[static_cast<std::size_t>(a)]) * base.cell[a] - 0.5 * base.cell[a]);
      dist2 += gap * gap;
    }
    if (dist2 <= radius * radius) offsets.push_back(d);
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (!base.occupied[i]) continue;
    std::array<int, kMaxDim> c{};
    std::size_t q = i;
    for (int a = 0; a < n; ++a) {
      c[static_cast<std::size_t>(a)] = static_cast<int>(q % static_cast<std::size_t>(base.dims[static_cast<std::size_t>(a)])) + k;
      q /= static_cast<std::size_t>(base.dims[static_cast<std::size_t>(a)]);
    }
    for (const auto& d : offsets) {
      std::size_t idx = 0, stride = 1;
      for (int a = 0; a < n; ++a) {
        idx += static_cast<std::size_t>(c[static_cast<std::size_t>(a)] + d[static_cast<std::size_t>(a)]) * stride;
        stride *= static_cast<std::size_t>(out.dims[static_cast<std::size_t>(a)]);
      }
      out.occupied[idx] = 1;
    }
  }
  RegionSpec F;
  F.kind = RegionSpec::Kind::VoxelSet;
  F.n = n;
  F.anchor = R.anchor;
  F.generator = "fatten(" + R.generator + ", r=" + std::to_string(radius) + ")";
  F.voxels = std::make_shared<const VoxelGrid>(std::move(out));
  return F;
}

ThetaStatistic theta_statistic(const WeightedSpacetime& st, const RegionSpec& A, const RegionSpec& B, double K,
                               std::size_t random_pairs, std::uint64_t seed, int threads) {
  if (!A.analytic() || !B.analytic()) fail(ErrorCode::InvalidArgument, "theta statistic needs analytic regions");
  const int n = A.n;
  std::vector<std::pair<Vec, Vec>> pairs;
  for (const Vec& x : A.corners())
    for (const Vec& y : B.corners()) pairs.emplace_back(x, y);
  QuasiRandom qr(2 * n, seed);
  for (std::size_t k = 0; k < random_pairs; ++k) {
    const std::vector<double> u = qr.next();
    Vec sa(n), sb(n);
    for (int a = 0; a < n; ++a) {
      sa[a] = u[static_cast<std::size_t>(a)];
      sb[a] = u[static_cast<std::size_t>(n + a)];
    }
    pairs.emplace_back(A.param(sa), B.param(sb));
  }
  if (pairs.empty()) fail(ErrorCode::EmptyRegion, "no sample pairs");
  std::vector<double> lp(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) lp[i] = time_separation(st, pairs[i].first, pairs[i].second).positive_part();
  });
  ThetaStatistic th;
  th.samples = pairs.size();
  th.inf = *std::min_element(lp.begin(), lp.end());
  th.sup = *std::max_element(lp.begin(), lp.end());
  th.nonpositive = static_cast<std::size_t>(std::count_if(lp.begin(), lp.end(), [](double v) { return v <= 0.0; }));
  th.value = K >= 0.0 ? th.inf : th.sup;
  return th;
}

}  // namespace ltbm
