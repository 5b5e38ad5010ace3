#include "biform/kernels.hpp"

#include <cmath>
#include <exception>
#include <omp.h>

namespace biform {

std::vector<double> sweep_values_serial(const std::vector<Point>& points, const PointKernel& fn) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(fn(p));
  return out;
}

std::vector<double> sweep_values_parallel(const std::vector<Point>& points, const PointKernel& fn) {
  const auto n = static_cast<long>(points.size());
  std::vector<double> out(points.size());
  std::vector<std::exception_ptr> errors(points.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(points[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<double> sweep_values(const std::vector<Point>& points, const PointKernel& fn, Execution exec) {
  return exec == Execution::Parallel ? sweep_values_parallel(points, fn) : sweep_values_serial(points, fn);
}

SweepStats reduce(const std::vector<double>& values) {
  SweepStats s;
  s.count = values.size();
  double sum = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    // NaN must not hide behind a comparison
    if (a > s.max || std::isnan(a)) {
      s.max = a;
      s.argmax = i;
    }
    sum += a;
  }
  if (s.count) s.mean = sum / static_cast<double>(s.count);
  return s;
}

SweepStats sweep(const std::vector<Point>& points, const PointKernel& fn, Execution exec) {
  return reduce(sweep_values(points, fn, exec));
}

SweepStats combine(const SweepStats& a, const SweepStats& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  SweepStats s;
  s.count = a.count + b.count;
  s.mean = (a.mean * static_cast<double>(a.count) + b.mean * static_cast<double>(b.count)) /
           static_cast<double>(s.count);
  if (b.max > a.max || std::isnan(b.max)) {
    s.max = b.max;
    s.argmax = a.count + b.argmax;
  } else {
    s.max = a.max;
    s.argmax = a.argmax;
  }
  return s;
}

double max_abs(std::span<const double> v) {
  double m = 0;
  for (double x : v) {
    if (std::isnan(x)) return x;
    m = std::max(m, std::abs(x));
  }
  return m;
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace biform
