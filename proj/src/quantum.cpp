#include "biform/quantum.hpp"

#include <cmath>
#include <map>

namespace biform {

namespace {

using Cplx = std::complex<double>;
using CDense = CJetMatrix::Dense;

constexpr double kMeanSwitch = 1e-7;
constexpr double kSeriesSwitch = 0.5;
constexpr int kQuadratureNodes = 40;

// Reshape every slot coefficient of a jet matrix (column-major storage order).
CJetMatrix reshaped(const CJetMatrix& m, Eigen::Index rows, Eigen::Index cols) {
  CJetMatrix r(rows, cols);
  for (unsigned s = 0; s < kJetSize; ++s)
    if (m.has(s)) r.set_part(s, m.part(s).reshaped(rows, cols));
  return r;
}

double min_eig(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

std::string point_text(std::span<const double> x) {
  return format_coords(x);
}

}  // namespace

// ---------------------------------------------------------------------------
// Basis

HermitianBasis HermitianBasis::gell_mann(int d) {
  if (d < 2) throw Error("gell_mann: d must be at least 2");
  HermitianBasis b{d, {}};
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix a = CMatrix::Zero(d, d);
      a(j, k) = a(k, j) = s;
      b.A.push_back(a);
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix a = CMatrix::Zero(d, d);
      a(j, k) = Cplx(0, -s);
      a(k, j) = Cplx(0, s);
      b.A.push_back(a);
    }
  for (int l = 1; l < d; ++l) {
    CMatrix a = CMatrix::Zero(d, d);
    const double c = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (int j = 0; j < l; ++j) a(j, j) = c;
    a(l, l) = -l * c;
    b.A.push_back(a);
  }
  return b;
}

double HermitianBasis::orthonormality_residual() const {
  double r = 0;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.size(); ++j)
      r = std::max(r, std::abs((A[i] * A[j]).trace() - Cplx(i == j ? 1.0 : 0.0)));
  return r;
}

double HermitianBasis::trace_residual() const {
  double r = 0;
  for (const auto& a : A) r = std::max(r, std::abs(a.trace()));
  return r;
}

double HermitianBasis::hermiticity_residual() const {
  double r = 0;
  for (const auto& a : A) r = std::max(r, (a - a.adjoint()).cwiseAbs().maxCoeff());
  return r;
}

// ---------------------------------------------------------------------------
// Monotone functions

OperatorMonotoneFunction::OperatorMonotoneFunction(std::string name, std::function<double(double)> f, double f2,
                                                   SpectralFunction inverse)
    : name_(std::move(name)), f_(std::move(f)), f2_(f2), inverse_(std::move(inverse)) {}

double OperatorMonotoneFunction::mean(double x, double y) const {
  const double delta = x - y;
  if (std::abs(delta) < kMeanSwitch * std::max(x, y)) return y + 0.5 * delta + 0.5 * f2_ * delta * delta / y;
  return y * f_(x / y);
}

double OperatorMonotoneFunction::symmetry_residual() const {
  double r = 0;
  for (int k = -60; k <= 60; ++k) {
    const double t = std::pow(10.0, k / 20.0);
    r = std::max(r, std::abs(t * f_(1.0 / t) - f_(t)) / std::max(1.0, f_(t)));
  }
  return r;
}

namespace {

double bkm(double t) {
  const double u = t - 1;
  if (std::abs(u) < 1e-4) return 1 + u / 2 - u * u / 12 + u * u * u / 24;
  return u / std::log(t);
}

// ln t / (t - 1). Near t = 1 the quotient cancels, so use the integral
// representation int_0^1 ds / (1 + s (t - 1)) on Gauss-Legendre nodes.
TaylorSeries bkm_reciprocal(const TaylorSeries& x) {
  if (std::abs(x[0] - 1) > kSeriesSwitch) return log(x) / (x - 1.0);
  const auto& rule = gauss_legendre_unit(kQuadratureNodes);
  TaylorSeries acc(x.order());
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = rule.nodes[q];
    acc += rule.weights[q] / (1.0 + s * (x - 1.0));
  }
  return acc;
}

const std::vector<OperatorMonotoneFunction>& registry() {
  static const std::vector<OperatorMonotoneFunction> r = {
      OperatorMonotoneFunction("BKM", bkm, -1.0 / 6.0, SpectralFunction("1/BKM", bkm_reciprocal)),
      OperatorMonotoneFunction("SLD", [](double t) { return 0.5 * (1 + t); }, 0.0,
                               SpectralFunction("1/SLD", [](const TaylorSeries& x) { return 2.0 / (1.0 + x); })),
      OperatorMonotoneFunction(
          "WY", [](double t) { return 0.25 * (1 + std::sqrt(t)) * (1 + std::sqrt(t)); }, -1.0 / 8.0,
          SpectralFunction("1/WY",
                           [](const TaylorSeries& x) {
                             const TaylorSeries s = 1.0 + sqrt(x);
                             return 4.0 / (s * s);
                           })),
  };
  return r;
}

}  // namespace

const OperatorMonotoneFunction& monotone_function(const std::string& name) {
  for (const auto& f : registry())
    if (f.name() == name) return f;
  std::string known;
  for (const auto& f : registry()) known += (known.empty() ? "" : ", ") + f.name();
  throw RegistryError("unknown monotone function '" + name + "' (known: " + known + ")");
}

std::vector<std::string> monotone_registry() {
  std::vector<std::string> names;
  for (const auto& f : registry()) names.push_back(f.name());
  return names;
}

// ---------------------------------------------------------------------------
// Superoperator, double route

SuperoperatorEval::SuperoperatorEval(const CMatrix& rho, const OperatorMonotoneFunction& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
  if (es.info() != Eigen::Success) throw Error("SuperoperatorEval: eigendecomposition failed");
  lambda_ = es.eigenvalues();
  U_ = es.eigenvectors();
  if (lambda_(0) <= 0) throw DomainError("SuperoperatorEval: state is not faithful");
  const Eigen::Index d = lambda_.size();
  inv_mean_.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = 0; l < d; ++l) inv_mean_(k, l) = 1.0 / f.mean(lambda_(k), lambda_(l));
}

CMatrix SuperoperatorEval::apply(const CMatrix& a) const {
  const CMatrix b = U_.adjoint() * a * U_;
  return U_ * b.cwiseProduct(inv_mean_.cast<Cplx>()) * U_.adjoint();
}

double SuperoperatorEval::min_mean() const { return 1.0 / inv_mean_.maxCoeff(); }

// ---------------------------------------------------------------------------
// State model

QuantumStateModel::QuantumStateModel(HermitianBasis basis, const OperatorMonotoneFunction& f, double eps_pos)
    : basis_(std::move(basis)), f_(&f), eps_(eps_pos) {
  const int n = dim();
  const double r = std::sqrt(1.0 - 1.0 / basis_.d);
  ChartManifold::Box box{std::vector<double>(n, -r), std::vector<double>(n, r)};
  auto b = basis_;
  const double eps = eps_;
  chart_ = std::make_shared<const ChartManifold>(
      n,
      [b, eps](std::span<const double> x) {
        CMatrix rho = CMatrix::Identity(b.d, b.d) / static_cast<double>(b.d);
        for (std::size_t i = 0; i < b.A.size(); ++i) rho += x[i] * b.A[i];
        return min_eig(rho) > eps;
      },
      box, "states(d=" + std::to_string(basis_.d) + ")");
}

CMatrix QuantumStateModel::rho(std::span<const double> theta) const {
  CMatrix r = CMatrix::Identity(levels(), levels()) / static_cast<double>(levels());
  for (std::size_t i = 0; i < basis_.A.size(); ++i) r += theta[i] * basis_.A[i];
  return r;
}

CJetMatrix QuantumStateModel::rho(std::span<const Jet> theta) const {
  CJetMatrix r(CMatrix::Identity(levels(), levels()) / static_cast<double>(levels()));
  for (unsigned s = 0; s < kJetSize; ++s) {
    bool any = false;
    for (const auto& t : theta) any = any || t[s] != 0.0;
    if (!any) continue;
    CDense& part = r.mutable_part(s);
    for (std::size_t i = 0; i < basis_.A.size(); ++i) part += theta[i][s] * basis_.A[i];
  }
  return r;
}

CMatrix QuantumStateModel::tangent(std::span<const double> x) const {
  CMatrix r = CMatrix::Zero(levels(), levels());
  for (std::size_t i = 0; i < basis_.A.size(); ++i) r += x[i] * basis_.A[i];
  return r;
}

double QuantumStateModel::min_eigenvalue(std::span<const double> theta) const { return min_eig(rho(theta)); }

MetricField QuantumStateModel::metric() const {
  const QuantumStateModel self = *this;
  return MetricField(chart_, [self](std::span<const Jet> x, const DiffContext&) {
    const int d = self.levels();
    const int n = self.dim();
    const CJetMatrix rho = self.rho(x);
    if (min_eig(rho.value()) <= self.eps_)
      throw DomainError("monotone metric: state not faithful at " + point_text(values(x)));
    const CJetMatrix inv = rho.inverse();
    const CJetMatrix phi = hermitian_function(kron(inv.conjugate(), rho), self.f_->reciprocal());
    // Columns vec(A_j); K(A_j) = unvec(phi vec A_j) rho^{-1}.
    CDense V(d * d, n);
    for (int j = 0; j < n; ++j) V.col(j) = self.basis_.A[j].reshaped();
    const CJetMatrix W = phi * CJetMatrix(V);
    // Tr(A_i unvec(w_j) rho^{-1}) = vec((rho^{-1} A_i)^T) . w_j
    CJetMatrix R(d * d, n);
    for (int i = 0; i < n; ++i) {
      const CJetMatrix mi = reshaped((inv * CJetMatrix(self.basis_.A[i])).transpose(), d * d, 1);
      for (unsigned s = 0; s < kJetSize; ++s)
        if (mi.has(s)) R.mutable_part(s).col(i) = mi.part(s);
    }
    const RJetMatrix g = real_part(R.transpose() * W);
    return ((g + g.transpose()) * 0.5).entries();
  });
}

Eigen::MatrixXd QuantumStateModel::metric_at(const Point& theta) const {
  const SuperoperatorEval k = superoperator(theta);
  const int n = dim();
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) {
    const CMatrix kj = k.apply(basis_.A[j]);
    for (int i = 0; i < n; ++i) g(i, j) = (basis_.A[i] * kj).trace().real();
  }
  return 0.5 * (g + g.transpose());
}

SuperoperatorEval QuantumStateModel::superoperator(const Point& theta) const {
  chart_->require(theta.coords);
  return SuperoperatorEval(rho(theta.coords), *f_);
}

Coframe QuantumStateModel::mixture_coframe() const {
  std::vector<OneForm> alphas;
  for (int i = 0; i < dim(); ++i) {
    std::vector<double> e(static_cast<std::size_t>(dim()), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    alphas.push_back(constant_one_form(chart_, e));
  }
  return Coframe(chart_, std::move(alphas));
}

QuantumStateModel build_state_model(int d, const std::string& f_name) {
  if (d < 2) throw Error("build_state_model: d must be at least 2, got " + std::to_string(d));
  return QuantumStateModel(HermitianBasis::gell_mann(d), monotone_function(f_name));
}

Eigen::MatrixXd monotone_metric(const QuantumStateModel& model, const Point& theta) { return model.metric_at(theta); }

// ---------------------------------------------------------------------------
// Relative entropy

double vnu_relative_entropy(const QuantumStateModel& model, const Point& rho, const Point& sigma) {
  model.chart()->require(rho.coords);
  model.chart()->require(sigma.coords);
  const auto log_of = [](const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    const Eigen::VectorXd l = es.eigenvalues().array().log();
    return CMatrix(es.eigenvectors() * l.cast<Cplx>().asDiagonal() * es.eigenvectors().adjoint());
  };
  const CMatrix r = model.rho(rho.coords);
  const CMatrix s = model.rho(sigma.coords);
  return (r * (log_of(r) - log_of(s))).trace().real();
}

TwoPointScalar vnu_contrast(const QuantumStateModel& model) {
  const QuantumStateModel m = model;
  return two_point_scalar(model.chart(), [m](std::span<const Jet> x, std::span<const Jet> y) {
    const CJetMatrix r = m.rho(x);
    const CJetMatrix s = m.rho(y);
    const CJet t = hermitian_function(r, spectral_xlogx()).trace() - (r * hermitian_function(s, spectral_log())).trace();
    return real_part(t);
  });
}

// ---------------------------------------------------------------------------
// Mixture structures

Connection mixture_connection(const QuantumStateModel& model) { return flat_connection(model.chart()); }

ContrastBiForm quantum_canonical_biform(const QuantumStateModel& model, const ProbeOptions& probes) {
  return canonical_biform(model.metric(), model.mixture_coframe(), probes);
}

PreContrastBiForm quantum_precontrast(const QuantumStateModel& model) {
  const MetricField g = model.metric();
  const int n = model.dim();
  return BiForm(model.chart(), 0, 1, [g, n](std::span<const Jet> m, std::span<const Jet> y, const DiffContext& ctx) {
    // beta^i = g_ik d theta^k for the coframe {d theta^i}
    const JetVec gy = g.eval(y, ctx);
    JetVec out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) out[k] += (m[i] - y[i]) * gy[static_cast<std::size_t>(i * n + k)];
    return out;
  });
}

std::vector<TorsionProfileRow> dual_torsion_profile(const QuantumStateModel& base, const std::vector<Point>& points, const DiffContext& ctx,
                                                    double tol, Execution exec) {
  std::vector<TorsionProfileRow> rows;
  for (const auto& name : monotone_registry()) {
    const QuantumStateModel model(base.basis(), monotone_function(name), base.eps_pos());
    ProbeOptions probes;
    probes.points = points;
    probes.ctx = ctx;
    probes.exec = exec;
    const ContrastBiForm w = quantum_canonical_biform(model, probes);
    const DualStructure dual = dual_structure(w);
    const SweepStats t = torsion_residual(dual.connection, points, ctx, exec);
    rows.push_back({name, t, t.max < tol});
  }
  return rows;
}

}  // namespace biform
