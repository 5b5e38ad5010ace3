#pragma once

// Test-side oracles. These deliberately avoid the library's jet machinery:
// everything here works on plain doubles through Point-level evaluation.

#include <cmath>
#include <functional>
#include <vector>

#include "biform/geometry.hpp"

namespace oracle {

using Fn = std::function<double(const std::vector<double>&)>;

inline std::vector<double> bump(std::vector<double> x, std::size_t i, double h) {
  x[i] += h;
  return x;
}

/// Central difference along the listed coordinate directions, nested.
inline double partial(const Fn& f, const std::vector<double>& x, std::vector<std::size_t> dirs, double h) {
  if (dirs.empty()) return f(x);
  const std::size_t i = dirs.back();
  dirs.pop_back();
  return (partial(f, bump(x, i, h), dirs, h) - partial(f, bump(x, i, -h), dirs, h)) / (2 * h);
}

/// d/ds|0 of g(s) with a 4-point stencil (error O(h^4)).
inline double derivative(const std::function<double(double)>& g, double h) {
  return (8 * (g(h) - g(-h)) - (g(2 * h) - g(-2 * h))) / (12 * h);
}

/// Random smooth scalar function of n variables on doubles and jets alike.
struct RandomScalar {
  struct Term {
    double c, a, b, ph, e;
    std::size_t i, j, k;
  };
  std::vector<Term> terms;
  double c0;

  RandomScalar(std::size_t n, biform::Rng& rng, int count = 4) : c0(rng.uniform(-1, 1)) {
    auto idx = [&] { return static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n) - 1)); };
    for (int t = 0; t < count; ++t)
      terms.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.3, 1.5), rng.uniform(0, 6.28),
                       rng.uniform(-0.5, 0.5), idx(), idx(), idx()});
  }

  template <class T>
  T operator()(std::span<const T> x) const {
    using std::cos, std::exp, std::sin;
    T r = T(c0);
    for (const auto& t : terms)
      r = r + t.c * x[t.i] * x[t.j] + t.a * sin(t.b * x[t.k] + t.ph) * exp(t.e * x[t.j]) +
          0.1 * t.c * x[t.i] * x[t.j] * x[t.k];
    return r;
  }
};

inline double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace oracle
