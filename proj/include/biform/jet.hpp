#pragma once

// Hyper-dual jets: truncated Taylor arithmetic over R[e0,e1,e2]/(ei^2).
//
// A jet carries one coefficient per subset of the three nilpotent slots, so a
// value seeded along three independent directions yields every mixed partial
// up to order three exactly (no truncation error, no step size). Nested
// differential operators each claim the next free slot; see DiffContext.

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "biform/errors.hpp"

namespace biform {

inline constexpr int kJetSlots = 3;
inline constexpr unsigned kJetSize = 1u << kJetSlots;

template <class T>
class HyperDual {
 public:
  using scalar_type = T;

  constexpr HyperDual() = default;
  constexpr HyperDual(T value) { c_[0] = value; }  // NOLINT(implicit)

  /// value + 1 * e_slot
  static HyperDual seed(int slot, T value = T{}) {
    HyperDual r(value);
    r.c_[1u << slot] = T{1};
    return r;
  }

  constexpr const T& value() const { return c_[0]; }
  constexpr const T& operator[](unsigned mask) const { return c_[mask]; }
  constexpr T& operator[](unsigned mask) { return c_[mask]; }

  /// Union of slot masks carrying a nonzero coefficient.
  unsigned support() const {
    unsigned s = 0;
    for (unsigned m = 1; m < kJetSize; ++m)
      if (c_[m] != T{}) s |= m;
    return s;
  }
  bool is_constant() const { return support() == 0; }

  /// Coefficient of e_slot, itself a jet over the remaining slots.
  HyperDual extract(int slot) const {
    const unsigned bit = 1u << slot;
    HyperDual r;
    for (unsigned m = 0; m < kJetSize; ++m)
      if (m & bit) r.c_[m & ~bit] = c_[m];
    return r;
  }

  /// Nilpotent part (everything but the value).
  HyperDual infinitesimal() const {
    HyperDual r = *this;
    r.c_[0] = T{};
    return r;
  }

  HyperDual& operator+=(const HyperDual& o) {
    for (unsigned m = 0; m < kJetSize; ++m) c_[m] += o.c_[m];
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    for (unsigned m = 0; m < kJetSize; ++m) c_[m] -= o.c_[m];
    return *this;
  }
  HyperDual& operator*=(const T& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  HyperDual& operator/=(const T& s) {
    for (auto& v : c_) v /= s;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }
  HyperDual& operator/=(const HyperDual& o) { return *this = *this / o; }

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend HyperDual operator-(HyperDual a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    HyperDual r;
    for (unsigned i = 0; i < kJetSize; ++i) {
      if (a.c_[i] == T{}) continue;
      for (unsigned j = 0; j < kJetSize; ++j)
        if ((i & j) == 0) r.c_[i | j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  friend HyperDual operator*(HyperDual a, const T& s) { return a *= s; }
  friend HyperDual operator*(const T& s, HyperDual a) { return a *= s; }
  friend HyperDual operator/(HyperDual a, const T& s) { return a /= s; }
  friend HyperDual operator/(const HyperDual& a, const HyperDual& b) { return a * reciprocal(b); }
  friend HyperDual operator/(const T& s, const HyperDual& b) { return s * reciprocal(b); }

  friend HyperDual reciprocal(const HyperDual& x) {
    const T a = x.c_[0];
    const T inv = T{1} / a;
    return compose(x, {inv, -inv * inv, T{2} * inv * inv * inv, T{-6} * inv * inv * inv * inv});
  }

  /// f(x) given f and its first three derivatives at x.value().
  friend HyperDual compose(const HyperDual& x, const std::array<T, 4>& d) {
    const HyperDual n = x.infinitesimal();
    HyperDual r(d[0]);
    if (n.is_constant()) return r;
    const HyperDual n2 = n * n;
    const HyperDual n3 = n2 * n;
    r += n * d[1];
    r += n2 * (d[2] / T{2});
    r += n3 * (d[3] / T{6});
    return r;
  }

 private:
  std::array<T, kJetSize> c_{};
};

using Jet = HyperDual<double>;
using CJet = HyperDual<std::complex<double>>;
using JetVec = std::vector<Jet>;

inline Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  return compose(x, {e, e, e, e});
}
inline Jet log(const Jet& x) {
  const double a = x.value();
  return compose(x, {std::log(a), 1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a)});
}
inline Jet sqrt(const Jet& x) {
  const double a = x.value();
  const double s = std::sqrt(a);
  return compose(x, {s, 0.5 / s, -0.25 / (s * a), 0.375 / (s * a * a)});
}
inline Jet pow(const Jet& x, double p) {
  const double a = x.value();
  return compose(x, {std::pow(a, p), p * std::pow(a, p - 1), p * (p - 1) * std::pow(a, p - 2),
                     p * (p - 1) * (p - 2) * std::pow(a, p - 3)});
}
inline Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return compose(x, {s, c, -s, -c});
}
inline Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return compose(x, {c, -s, -c, s});
}
inline Jet tanh(const Jet& x) {
  const double t = std::tanh(x.value());
  const double d1 = 1 - t * t;
  return compose(x, {t, d1, -2 * t * d1, d1 * (6 * t * t - 2)});
}
inline Jet atan(const Jet& x) {
  const double a = x.value();
  const double q = 1 / (1 + a * a);
  return compose(x, {std::atan(a), q, -2 * a * q * q, (6 * a * a - 2) * q * q * q});
}

inline CJet to_complex(const Jet& x) {
  CJet r;
  for (unsigned m = 0; m < kJetSize; ++m) r[m] = x[m];
  return r;
}
inline Jet real_part(const CJet& x) {
  Jet r;
  for (unsigned m = 0; m < kJetSize; ++m) r[m] = x[m].real();
  return r;
}
inline CJet conj(const CJet& x) {
  CJet r;
  for (unsigned m = 0; m < kJetSize; ++m) r[m] = std::conj(x[m]);
  return r;
}

JetVec constant_jets(std::span<const double> x);
std::vector<double> values(std::span<const Jet> x);

// ---------------------------------------------------------------------------
// Differentiation context

enum class DiffMode { TaylorJet, CentralDifference };

struct JetConfig {
  DiffMode mode = DiffMode::TaylorJet;
  double fd_step = 1e-4;
  int max_order = kJetSlots;

  /// Throws biform::Error on fd_step <= 0 or an unsupported max_order.
  void validate() const;
};

const char* mode_name(DiffMode mode);

/// Carried through every evaluation: the derivative mode and how many jet
/// slots enclosing operators have already claimed.
struct DiffContext {
  JetConfig config{};
  int depth = 0;

  DiffContext deeper() const {
    DiffContext c = *this;
    ++c.depth;
    return c;
  }
};

/// d/dt fn(t) at t = 0. In jet mode fn receives t seeded in the next free
/// slot; in central-difference mode it is called at t = +-fd_step.
JetVec derive(const DiffContext& ctx,
              const std::function<JetVec(const Jet& t, const DiffContext& inner)>& fn);

}  // namespace biform
