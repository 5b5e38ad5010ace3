#pragma once

#include <cstddef>
#include <vector>

namespace biform {

/// Univariate truncated Taylor series sum_k c_k h^k about a fixed point.
/// Used to get high-order derivatives of scalar spectral functions.
class TaylorSeries {
 public:
  explicit TaylorSeries(std::size_t order, double value = 0.0);
  /// x0 + h, i.e. the independent variable expanded about x0.
  static TaylorSeries variable(std::size_t order, double x0);

  std::size_t order() const { return c_.size() - 1; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }
  const std::vector<double>& coefficients() const { return c_; }

  TaylorSeries& operator+=(const TaylorSeries& o);
  TaylorSeries& operator-=(const TaylorSeries& o);
  TaylorSeries& operator+=(double s);
  TaylorSeries& operator*=(double s);

  friend TaylorSeries operator+(TaylorSeries a, const TaylorSeries& b) { return a += b; }
  friend TaylorSeries operator-(TaylorSeries a, const TaylorSeries& b) { return a -= b; }
  friend TaylorSeries operator+(TaylorSeries a, double s) { return a += s; }
  friend TaylorSeries operator+(double s, TaylorSeries a) { return a += s; }
  friend TaylorSeries operator-(TaylorSeries a, double s) { return a += -s; }
  friend TaylorSeries operator-(double s, const TaylorSeries& a);
  friend TaylorSeries operator*(TaylorSeries a, double s) { return a *= s; }
  friend TaylorSeries operator*(double s, TaylorSeries a) { return a *= s; }
  friend TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b);
  friend TaylorSeries operator/(const TaylorSeries& a, const TaylorSeries& b);
  friend TaylorSeries operator/(double s, const TaylorSeries& b);

 private:
  std::vector<double> c_;
};

TaylorSeries log(const TaylorSeries& x);
TaylorSeries exp(const TaylorSeries& x);
TaylorSeries sqrt(const TaylorSeries& x);

}  // namespace biform
