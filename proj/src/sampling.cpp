#include "ltbm/sampling.hpp"

#include <algorithm>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace ltbm {

struct QuasiRandom::Impl {
  explicit Impl(int dim) : engine(static_cast<std::size_t>(dim)) {}
  boost::random::sobol engine;
  std::vector<double> shift;
};

QuasiRandom::QuasiRandom(int dim, std::uint64_t seed) : dim_(dim), impl_(std::make_unique<Impl>(dim)) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < dim; ++i) impl_->shift.push_back(u(rng));
  // Skip the origin, which the unshifted sequence starts with.
  impl_->engine.discard(static_cast<std::uintmax_t>(dim));
}

QuasiRandom::~QuasiRandom() = default;
QuasiRandom::QuasiRandom(QuasiRandom&&) noexcept = default;
QuasiRandom& QuasiRandom::operator=(QuasiRandom&&) noexcept = default;

std::vector<double> QuasiRandom::next() {
  std::vector<double> out(static_cast<std::size_t>(dim_));
  const double span = static_cast<double>(boost::random::sobol::max()) + 1.0;
  for (int i = 0; i < dim_; ++i) {
    const double v = static_cast<double>(impl_->engine()) / span + impl_->shift[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = v - std::floor(v);
  }
  return out;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : 1, 1,
                                                      std::max<std::size_t>(count, 1));
  if (workers == 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first;
  std::mutex mu;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      try {
        body(b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace ltbm
