#pragma once

#include <functional>
#include <vector>

#include "akgrav/expr.hpp"

namespace akgrav {

// Per-coordinate interval box for sample sweeps.
struct SampleDomain {
  std::vector<std::pair<double, double>> intervals;

  static SampleDomain cube(int dim, double lo, double hi);
};

// Deterministic quasi-random points: Halton sequences (bases 2,3,5,...) mapped
// into the box. The seed offsets the start index, so (domain, count, seed)
// fully determines the sweep. Points with any v-coordinate in (-0.1, 0.1) are
// skipped and replaced by later sequence members; generating-function
// constructions can degenerate near y = 0.
std::vector<Point> halton_points(const SampleDomain& domain, int count,
                                 unsigned seed, int n_horizontal);

double halton(unsigned index, unsigned base);

// Chunked parallel loop used by the residual sweeps; results must be written
// to disjoint slots so the reduction stays deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Max |residual| sweep helper with skipped-point accounting.
struct SweepResult {
  double max_residual = 0.0;
  int evaluated = 0;
  int skipped = 0;
};

SweepResult sweep_max(const std::vector<Point>& points,
                      const std::function<double(const Point&)>& residual_at);

}  // namespace akgrav
