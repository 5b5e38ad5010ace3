#pragma once

// Faithful d-level quantum states in the affine chart
//   rho(theta) = I/d + sum_i theta^i A_i,
// with {A_i} an orthonormal traceless Hermitian basis, monotone metrics
//   g^f(X, Y) = Re Tr(X K^f_rho(Y)),   K^f_rho = (R_rho f(L_rho R_rho^{-1}))^{-1},
// the vNU relative entropy, and the canonical bi-form / pre-contrast of the
// mixture (theta-flat) connection.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "biform/spectral.hpp"
#include "biform/teleparallel.hpp"

namespace biform {

using CMatrix = Eigen::MatrixXcd;

struct HermitianBasis {
  int d;
  std::vector<CMatrix> A;  // d^2 - 1 traceless, Tr(A_i A_j) = delta_ij

  /// Generalized Gell-Mann matrices: symmetric, antisymmetric, then diagonal
  /// families, scaled to unit Hilbert-Schmidt norm. d = 2 gives Pauli / sqrt 2.
  static HermitianBasis gell_mann(int d);
  double orthonormality_residual() const;
  double trace_residual() const;
  double hermiticity_residual() const;
};

class OperatorMonotoneFunction {
 public:
  /// f must satisfy f(1) = 1 and t f(1/t) = f(t); f2 = f''(1) feeds the
  /// near-diagonal expansion of the mean.
  OperatorMonotoneFunction(std::string name, std::function<double(double)> f, double f2, SpectralFunction inverse);

  const std::string& name() const { return name_; }
  double operator()(double t) const { return f_(t); }
  /// m_f(x, y) = y f(x/y); second-order expansion about x = y when
  /// |x - y| < 1e-7 max(x, y).
  double mean(double x, double y) const;
  /// 1/f as a spectral function, for the jet route.
  const SpectralFunction& reciprocal() const { return inverse_; }
  /// max |t f(1/t) - f(t)| on a log grid over [1e-3, 1e3], and |f(1) - 1|.
  double symmetry_residual() const;
  double normalization_residual() const { return std::abs(f_(1.0) - 1.0); }

 private:
  std::string name_;
  std::function<double(double)> f_;
  double f2_;
  SpectralFunction inverse_;
};

/// BKM (t-1)/ln t, SLD (1+t)/2, WY (1+sqrt t)^2/4. RegistryError otherwise.
const OperatorMonotoneFunction& monotone_function(const std::string& name);
std::vector<std::string> monotone_registry();

/// K^f_rho for one state, from the eigendecomposition of rho.
class SuperoperatorEval {
 public:
  SuperoperatorEval(const CMatrix& rho, const OperatorMonotoneFunction& f);
  CMatrix apply(const CMatrix& a) const;
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  /// Smallest m_f(l_k, l_l) over the spectrum.
  double min_mean() const;

 private:
  Eigen::VectorXd lambda_;
  CMatrix U_;
  Eigen::MatrixXd inv_mean_;  // 1 / m_f(l_k, l_l)
};

inline constexpr double kMinEigenvalue = 1e-6;

class QuantumStateModel {
 public:
  QuantumStateModel(HermitianBasis basis, const OperatorMonotoneFunction& f, double eps_pos = kMinEigenvalue);

  int levels() const { return basis_.d; }
  int dim() const { return static_cast<int>(basis_.A.size()); }
  const HermitianBasis& basis() const { return basis_; }
  const ChartPtr& chart() const { return chart_; }
  const OperatorMonotoneFunction& function() const { return *f_; }
  double eps_pos() const { return eps_; }

  CMatrix rho(std::span<const double> theta) const;
  CJetMatrix rho(std::span<const Jet> theta) const;
  /// Tangent vector -> traceless Hermitian operator sum X^i A_i.
  CMatrix tangent(std::span<const double> x) const;
  /// Smallest eigenvalue of rho(theta).
  double min_eigenvalue(std::span<const double> theta) const;

  /// g^f as a jet-capable field: phi(T) with T = conj(rho^{-1}) (x) rho acting
  /// on column-major vec, phi = 1/f.
  MetricField metric() const;
  /// Reference evaluation through the eigendecomposition of rho.
  Eigen::MatrixXd metric_at(const Point& theta) const;
  SuperoperatorEval superoperator(const Point& theta) const;

  /// Coordinate functions e_{A_i} = Tr(A_i rho) as a coframe {d e_{A_i}}.
  Coframe mixture_coframe() const;

 private:
  HermitianBasis basis_;
  const OperatorMonotoneFunction* f_;
  double eps_;
  ChartPtr chart_;
};

/// build_state_model(d, name): d >= 2, name in the registry.
QuantumStateModel build_state_model(int d, const std::string& f_name);

/// g_ij(theta) through the eigendecomposition; DomainError outside the domain.
Eigen::MatrixXd monotone_metric(const QuantumStateModel& model, const Point& theta);

/// Tr(rho log rho - rho log sigma), eigendecomposition route.
double vnu_relative_entropy(const QuantumStateModel& model, const Point& rho, const Point& sigma);
/// The same as a two-point scalar on the chart, jet-capable.
TwoPointScalar vnu_contrast(const QuantumStateModel& model);

/// Mixture connection: Gamma = 0 in theta.
Connection mixture_connection(const QuantumStateModel& model);
/// canonical_biform(g^f, {d e_{A_i}}).
ContrastBiForm quantum_canonical_biform(const QuantumStateModel& model, const ProbeOptions& probes = {});
/// S(|v)(m, n) = sum_i (e_{A_i}(m) - e_{A_i}(n)) beta^i(v)(n).
PreContrastBiForm quantum_precontrast(const QuantumStateModel& model);

struct TorsionProfileRow {
  std::string function;
  SweepStats dual_torsion;  // |T^k_ij| of the g^f-dual of the mixture connection
  bool torsion_free;
};
/// One row per registry entry, in registry order, on model's state space (the
/// model's own f is not used).
std::vector<TorsionProfileRow> dual_torsion_profile(const QuantumStateModel& model, const std::vector<Point>& points, const DiffContext& ctx = {},
                                                    double tol = 1e-8, Execution exec = Execution::Serial);

}  // namespace biform
