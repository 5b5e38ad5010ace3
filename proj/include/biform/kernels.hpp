#pragma once

// Probe-point sweeps. Every residual the library reports is a max/mean over
// a list of points; the per-point work is independent, so the sweep can run
// under OpenMP. The serial loop is kept as the reference and both paths
// reduce in point order, so their results are bit-identical.

#include <functional>
#include <vector>

#include "biform/geometry.hpp"

namespace biform {

enum class Execution { Serial, Parallel };

struct SweepStats {
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
  std::size_t argmax = 0;  // index of the point attaining max
};

using PointKernel = std::function<double(const Point&)>;

/// fn at every point, in point order. Exceptions from any point are rethrown
/// (the lowest failing index wins in both modes).
std::vector<double> sweep_values(const std::vector<Point>& points, const PointKernel& fn,
                                 Execution exec = Execution::Serial);
std::vector<double> sweep_values_serial(const std::vector<Point>& points, const PointKernel& fn);
std::vector<double> sweep_values_parallel(const std::vector<Point>& points, const PointKernel& fn);

/// max and mean of |fn| over the points.
SweepStats sweep(const std::vector<Point>& points, const PointKernel& fn, Execution exec = Execution::Serial);
SweepStats reduce(const std::vector<double>& values);

/// Merge: max of maxima, mean weighted by count.
SweepStats combine(const SweepStats& a, const SweepStats& b);

double max_abs(std::span<const double> v);

int thread_count();

}  // namespace biform
