#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace ltbm {

/// Sobol points in [0,1)^dim with a Cranley-Patterson rotation drawn from
/// the seed, so different seeds give independent randomized sequences.
class QuasiRandom {
 public:
  QuasiRandom(int dim, std::uint64_t seed);
  ~QuasiRandom();
  QuasiRandom(QuasiRandom&&) noexcept;
  QuasiRandom& operator=(QuasiRandom&&) noexcept;

  int dim() const { return dim_; }
  std::vector<double> next();

 private:
  struct Impl;
  int dim_;
  std::unique_ptr<Impl> impl_;
};

/// Runs body(begin, end) over [0, count) split into contiguous blocks, one
/// per worker. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace ltbm
