#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "biform/jet_matrix.hpp"
#include "biform/taylor_series.hpp"

namespace biform {

/// A real scalar function on (0, inf) that can be expanded to arbitrary
/// Taylor order. Matrix functions of Hermitian jets are built from it.
class SpectralFunction {
 public:
  using SeriesFn = std::function<TaylorSeries(const TaylorSeries&)>;

  SpectralFunction(std::string name, SeriesFn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  const std::string& name() const { return name_; }
  double operator()(double x) const;
  /// f^(k)(x) / k! for k = 0..order.
  std::vector<double> taylor(double x, std::size_t order) const;

 private:
  std::string name_;
  SeriesFn fn_;
};

SpectralFunction spectral_log();
SpectralFunction spectral_xlogx();

/// f[x0, ..., xn] for n <= 3, confluent points allowed. Clustered arguments
/// are summed from the Taylor expansion about their mean.
double divided_difference(const SpectralFunction& f, std::span<const double> points);

/// f(M) for a jet matrix M whose every slot coefficient is Hermitian. Exact in
/// the nilpotent part: the expansion in divided differences of the spectrum of
/// M's value terminates at the number of active slots.
CJetMatrix hermitian_function(const CJetMatrix& m, const SpectralFunction& f);

/// Gauss-Legendre nodes and weights on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre_unit(int n);

}  // namespace biform
