#include "akgrav/sampling.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace akgrav {

SampleDomain SampleDomain::cube(int dim, double lo, double hi) {
  SampleDomain d;
  d.intervals.assign(static_cast<std::size_t>(dim), {lo, hi});
  return d;
}

double halton(unsigned index, unsigned base) {
  double f = 1.0, r = 0.0;
  unsigned i = index;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

namespace {
constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
}

std::vector<Point> halton_points(const SampleDomain& domain, int count,
                                 unsigned seed, int n_horizontal) {
  const std::size_t dim = domain.intervals.size();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  unsigned index = 17 + seed * 1009;  // skip the degenerate prefix, offset by seed
  while (static_cast<int>(out.size()) < count) {
    Point p(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      auto [lo, hi] = domain.intervals[d];
      p[d] = lo + (hi - lo) * halton(index, kPrimes[d % std::size(kPrimes)]);
    }
    ++index;
    bool near_zero_fiber = false;
    for (std::size_t d = static_cast<std::size_t>(n_horizontal); d < dim; ++d)
      if (std::abs(p[d]) < 0.1) near_zero_fiber = true;
    if (near_zero_fiber) continue;
    out.push_back(std::move(p));
    if (index == 0) break;  // wrapped; cannot happen at sane counts
  }
  return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = std::min<std::size_t>(hw == 0 ? 1 : hw, count);
  if (workers <= 1 || count < 8) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

SweepResult sweep_max(const std::vector<Point>& points,
                      const std::function<double(const Point&)>& residual_at) {
  SweepResult res;
  std::vector<double> vals(points.size(), 0.0);
  std::vector<char> ok(points.size(), 0);
  parallel_for(points.size(), [&](std::size_t i) {
    try {
      vals[i] = residual_at(points[i]);
      ok[i] = 1;
    } catch (const DomainError&) {
      ok[i] = 0;
    }
  });
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (ok[i]) {
      res.max_residual = std::max(res.max_residual, vals[i]);
      ++res.evaluated;
    } else {
      ++res.skipped;
    }
  }
  return res;
}

}  // namespace akgrav
