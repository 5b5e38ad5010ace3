#include "biform/taylor_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biform {

TaylorSeries::TaylorSeries(std::size_t order, double value) : c_(order + 1, 0.0) { c_[0] = value; }

TaylorSeries TaylorSeries::variable(std::size_t order, double x0) {
  TaylorSeries s(order, x0);
  if (order >= 1) s.c_[1] = 1.0;
  return s;
}

TaylorSeries& TaylorSeries::operator+=(const TaylorSeries& o) {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}
TaylorSeries& TaylorSeries::operator-=(const TaylorSeries& o) {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}
TaylorSeries& TaylorSeries::operator+=(double s) {
  c_[0] += s;
  return *this;
}
TaylorSeries& TaylorSeries::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

TaylorSeries operator-(double s, const TaylorSeries& a) {
  TaylorSeries r = a * -1.0;
  r += s;
  return r;
}

TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b) {
  const std::size_t n = a.order();
  TaylorSeries r(n);
  for (std::size_t k = 0; k <= n; ++k) {
    double s = 0;
    for (std::size_t i = 0; i <= k; ++i) s += a[i] * b[k - i];
    r[k] = s;
  }
  return r;
}

TaylorSeries operator/(const TaylorSeries& a, const TaylorSeries& b) {
  if (b[0] == 0.0) throw std::domain_error("TaylorSeries: division by a series with zero value");
  const std::size_t n = a.order();
  TaylorSeries r(n);
  for (std::size_t k = 0; k <= n; ++k) {
    double s = a[k];
    for (std::size_t i = 1; i <= k; ++i) s -= b[i] * r[k - i];
    r[k] = s / b[0];
  }
  return r;
}

TaylorSeries operator/(double s, const TaylorSeries& b) { return TaylorSeries(b.order(), s) / b; }

TaylorSeries log(const TaylorSeries& x) {
  if (!(x[0] > 0.0)) throw std::domain_error("TaylorSeries: log of non-positive value");
  // x * l' = x'
  const std::size_t n = x.order();
  TaylorSeries r(n, std::log(x[0]));
  for (std::size_t k = 1; k <= n; ++k) {
    double s = k * x[k];
    for (std::size_t i = 1; i < k; ++i) s -= i * r[i] * x[k - i];
    r[k] = s / (k * x[0]);
  }
  return r;
}

TaylorSeries exp(const TaylorSeries& x) {
  // e' = x' e
  const std::size_t n = x.order();
  TaylorSeries r(n, std::exp(x[0]));
  for (std::size_t k = 1; k <= n; ++k) {
    double s = 0;
    for (std::size_t i = 1; i <= k; ++i) s += i * x[i] * r[k - i];
    r[k] = s / k;
  }
  return r;
}

TaylorSeries sqrt(const TaylorSeries& x) {
  if (!(x[0] > 0.0)) throw std::domain_error("TaylorSeries: sqrt of non-positive value");
  // r * r = x
  const std::size_t n = x.order();
  TaylorSeries r(n, std::sqrt(x[0]));
  for (std::size_t k = 1; k <= n; ++k) {
    double s = x[k];
    for (std::size_t i = 1; i < k; ++i) s -= r[i] * r[k - i];
    r[k] = s / (2 * r[0]);
  }
  return r;
}

}  // namespace biform
