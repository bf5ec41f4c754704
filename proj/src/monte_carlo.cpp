#include "doleans/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace doleans {

void RunningStats::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d = other.mean_ - mean_;
  mean_ += d * (nb / n);
  m2_ += other.m2_ + d * d * (na * nb / n);
  n_ += other.n_;
}

double RunningStats::variance() const {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DOLEANS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

namespace {

struct Block {
  std::vector<RunningStats> stats;
  std::vector<std::size_t> non_finite;
  std::size_t capped = 0;
};

// Fixed-shape pairwise reduction: the tree only depends on the block count.
RunningStats reduce_pairwise(std::vector<RunningStats> level) {
  while (level.size() > 1) {
    std::vector<RunningStats> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      RunningStats s = level[i];
      s.merge(level[i + 1]);
      next.push_back(s);
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.empty() ? RunningStats{} : level.front();
}

}  // namespace

std::vector<Estimate> estimate_expectations(const ProcessModel& model, const VectorPathFunctional& functional,
                                            std::size_t width, std::size_t n, const SeedSpec& seeds) {
  if (n < 2) throw std::invalid_argument("Monte Carlo needs n >= 2");
  if (seeds.streams == 0) throw std::invalid_argument("SeedSpec.streams must be positive");
  if (width == 0) throw std::invalid_argument("functional width must be positive");

  const std::size_t n_blocks = static_cast<std::size_t>(std::min<std::uint64_t>(seeds.streams, n));
  std::vector<Block> blocks(n_blocks);

  auto run_block = [&](std::size_t b) {
    const std::size_t begin = n * b / n_blocks;
    const std::size_t end = n * (b + 1) / n_blocks;
    Block& out = blocks[b];
    out.stats.assign(width, RunningStats{});
    out.non_finite.assign(width, 0);
    std::vector<double> values;
    for (std::size_t j = begin; j < end; ++j) {
      const JumpPath path = model.sample(seeds.seed, j);
      if (path.capped) ++out.capped;
      values.assign(width, 0.0);
      functional(path, values);
      for (std::size_t k = 0; k < width; ++k) {
        if (std::isfinite(values[k]))
          out.stats[k].add(values[k]);
        else
          ++out.non_finite[k];
      }
    }
  };

  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n_blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) {
          try {
            run_block(b);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::size_t capped = 0;
  for (const Block& b : blocks) capped += b.capped;
  std::vector<Estimate> result(width);
  for (std::size_t k = 0; k < width; ++k) {
    std::vector<RunningStats> parts;
    parts.reserve(n_blocks);
    std::size_t bad = 0;
    for (const Block& b : blocks) {
      parts.push_back(b.stats[k]);
      bad += b.non_finite[k];
    }
    if (static_cast<double>(bad) > kMaxNonFiniteFraction * static_cast<double>(n)) {
      throw EstimationError(std::to_string(bad) + " of " + std::to_string(n) +
                                " functional values are not finite",
                            bad, n);
    }
    const RunningStats total = reduce_pairwise(std::move(parts));
    Estimate& e = result[k];
    e.n = total.count();
    e.non_finite = bad;
    e.capped = capped;
    e.mean = total.mean();
    e.se = e.n > 0 ? std::sqrt(total.variance() / static_cast<double>(e.n)) : 0.0;
  }
  return result;
}

Estimate estimate_expectation(const ProcessModel& model, const ScalarPathFunctional& functional,
                              std::size_t n, const SeedSpec& seeds) {
  auto wrapped = [&functional](const JumpPath& path, std::vector<double>& out) { out[0] = functional(path); };
  return estimate_expectations(model, wrapped, 1, n, seeds).front();
}

}  // namespace doleans
