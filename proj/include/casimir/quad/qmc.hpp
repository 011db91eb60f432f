#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "casimir/quad/sobol.hpp"
#include "casimir/quad/transform.hpp"

namespace casimir::quad {

/// Cubature request: dimension, per-replication sample budget (a power of
/// two, to keep the digital-net balance), number of independent
/// randomizations used for the error bar, and the seed that fixes every
/// random element of the run.
struct QuadSpec {
  int dim = 1;
  std::uint64_t budget = std::uint64_t{1} << 21;  // samples per replication
  int replications = 16;
  std::uint64_t seed = 0;
  double target_rel_error = 0.02;  // estimates above this come back flagged
  int threads = 0;                 // 0: use CASIMIR_THREADS or hardware
  std::vector<Transform> transforms = {};  // manifest metadata
};

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;  // replication-based standard error
  std::uint64_t n_total = 0;
  std::uint64_t seed = 0;
  bool converged = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Fixed-shape pairwise (tree) summation: the reduction order depends only
/// on the index range, never on thread scheduling.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace detail

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CASIMIR_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Randomized quasi-Monte Carlo cubature of f over the unit cube.
///
/// Each replication evaluates the same Sobol net under an independent
/// digital shift; value is the replication mean and std_error the standard
/// error of that mean. For a fixed (seed, budget, replications) the result
/// is bitwise identical for any worker count: samples are generated from
/// their index and block sums are reduced in fixed index order.
template <class F>
IntegralEstimate integrate_qmc(F&& f, const QuadSpec& spec) {
  if (spec.dim < 1 || spec.dim > SobolSequence::kMaxDim)
    throw std::invalid_argument("integrate_qmc: dimension out of range");
  if (spec.budget == 0 || !std::has_single_bit(spec.budget))
    throw std::invalid_argument("integrate_qmc: budget must be a power of two");
  if (spec.replications < 2)
    throw std::invalid_argument("integrate_qmc: need at least 2 replications");

  const SobolSequence seq(spec.dim);
  const int reps = spec.replications;
  const int dim = spec.dim;

  // Per-replication digital shift words, fixed by the seed alone.
  std::vector<std::vector<std::uint32_t>> shifts(reps);
  for (int r = 0; r < reps; ++r) {
    std::uint64_t state =
        spec.seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(r + 1));
    shifts[r].resize(dim);
    for (int j = 0; j < dim; ++j)
      shifts[r][j] = static_cast<std::uint32_t>(detail::splitmix64(state) >> 32);
  }

  constexpr std::uint64_t kBlock = 8192;
  const std::uint64_t nblocks = (spec.budget + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> block_sums(
      reps, std::vector<double>(nblocks, 0.0));

  const int nthreads = resolve_threads(spec.threads);
  std::atomic<std::uint64_t> next_task{0};
  const std::uint64_t n_tasks = static_cast<std::uint64_t>(reps) * nblocks;
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::atomic<bool> stop{false};

  auto worker = [&]() {
    std::vector<double> u(dim);
    std::vector<double> vals(kBlock);
    try {
      for (;;) {
        const std::uint64_t t = next_task.fetch_add(1);
        if (t >= n_tasks || stop.load(std::memory_order_relaxed)) break;
        const int r = static_cast<int>(t / nblocks);
        const std::uint64_t blk = t % nblocks;
        const std::uint64_t k0 = blk * kBlock;
        const std::uint64_t k1 = std::min(k0 + kBlock, spec.budget);
        const std::span<const std::uint32_t> shift(shifts[r]);
        for (std::uint64_t k = k0; k < k1; ++k) {
          seq.point(k, shift, u);
          const double fx = f(std::span<const double>(u));
          if (std::isnan(fx)) {
            std::ostringstream os;
            os << "integrate_qmc: integrand returned NaN at u = (";
            for (int j = 0; j < dim; ++j) os << (j ? ", " : "") << u[j];
            os << "), replication " << r << ", index " << k;
            throw std::runtime_error(os.str());
          }
          vals[k - k0] = fx;
        }
        block_sums[r][blk] = detail::pairwise_sum(vals.data(), k1 - k0);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!first_error) first_error = std::current_exception();
      stop.store(true, std::memory_order_relaxed);
    }
  };

  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<double> rep_means(reps);
  for (int r = 0; r < reps; ++r)
    rep_means[r] = detail::pairwise_sum(block_sums[r].data(), nblocks) /
                   static_cast<double>(spec.budget);

  IntegralEstimate est;
  est.value = detail::pairwise_sum(rep_means.data(), reps) /
              static_cast<double>(reps);
  double ss = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double d = rep_means[r] - est.value;
    ss += d * d;
  }
  est.std_error = std::sqrt(ss / (static_cast<double>(reps) *
                                  static_cast<double>(reps - 1)));
  est.n_total = spec.budget * static_cast<std::uint64_t>(reps);
  est.seed = spec.seed;
  est.converged =
      est.std_error <= spec.target_rel_error * std::abs(est.value) ||
      (est.value == 0.0 && est.std_error == 0.0);
  return est;
}

}  // namespace casimir::quad
