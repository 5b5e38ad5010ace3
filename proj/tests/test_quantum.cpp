#include <cmath>

#include "biform/errors.hpp"
#include "biform/quantum.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace biform;

namespace {

using Cplx = std::complex<double>;

Eigen::MatrixXcd herm_power(const Eigen::MatrixXcd& a, double p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const Eigen::VectorXd l = es.eigenvalues().array().pow(p);
  return es.eigenvectors() * l.cast<Cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

// int_0^inf Tr(X (rho+t)^-1 Y (rho+t)^-1) dt with t = e^s, trapezoid in s.
double bkm_oracle(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& X, const Eigen::MatrixXcd& Y) {
  const double h = 0.02;
  const auto id = Eigen::MatrixXcd::Identity(rho.rows(), rho.cols());
  double acc = 0;
  for (double s = -45; s <= 45; s += h) {
    const double t = std::exp(s);
    const Eigen::MatrixXcd r = (rho + t * id).inverse();
    acc += (X * r * Y * r).trace().real() * t;
  }
  return acc * h;
}

// int_0^1 rho^s Y rho^{1-s} ds, composite Simpson.
Eigen::MatrixXcd log_mean_oracle(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& Y) {
  const int n = 400;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (int k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) / n;
    const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
    acc += w * herm_power(rho, s) * Y * herm_power(rho, 1 - s);
  }
  return acc / (3.0 * n);
}

// Points whose spectrum stays away from zero, so finite differences and
// quadratures on the test side remain accurate.
std::vector<Point> interior(const QuantumStateModel& m, int count, std::uint64_t seed, double floor = 0.05) {
  Rng rng(seed);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count)
    for (auto& p : m.chart()->sample(rng, count))
      if (m.min_eigenvalue(p.coords) > floor && static_cast<int>(out.size()) < count) out.push_back(p);
  return out;
}

double max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Eigen::MatrixXd as_matrix(const std::vector<double>& v, int n) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), n, n);
}

}  // namespace

TEST_CASE("Gell-Mann basis is orthonormal, traceless and Hermitian") {
  for (int d : {2, 3, 4}) {
    const auto b = HermitianBasis::gell_mann(d);
    CHECK(static_cast<int>(b.A.size()) == d * d - 1);
    CHECK(b.orthonormality_residual() < 1e-14);
    CHECK(b.trace_residual() < 1e-14);
    CHECK(b.hermiticity_residual() == 0.0);
  }
  const auto q = HermitianBasis::gell_mann(2);
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, Cplx(0, -1), Cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  const double r = 1 / std::sqrt(2.0);
  CHECK((q.A[0] - r * sx).norm() < 1e-15);
  CHECK((q.A[1] - r * sy).norm() < 1e-15);
  CHECK((q.A[2] - r * sz).norm() < 1e-15);
}

TEST_CASE("monotone registry: normalization, symmetry, unknown names") {
  CHECK(monotone_registry() == std::vector<std::string>{"BKM", "SLD", "WY"});
  for (const auto& name : monotone_registry()) {
    const auto& f = monotone_function(name);
    CHECK(f.normalization_residual() < 1e-15);
    CHECK(f.symmetry_residual() < 1e-12);
    // 1/f as a spectral function agrees with the scalar
    for (double t : {0.05, 0.7, 1.0, 1.3, 1.6, 20.0})
      CHECK(f.reciprocal()(t) * f(t) == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(monotone_function("RLD"), RegistryError);
  CHECK_THROWS_AS(build_state_model(2, "nope"), RegistryError);
  CHECK_THROWS_AS(build_state_model(1, "BKM"), Error);
}

TEST_CASE("mean m_f is continuous across the near-degenerate switch") {
  for (const auto& name : monotone_registry()) {
    const auto& f = monotone_function(name);
    for (double y : {1e-3, 0.4, 0.9}) {
      for (double rel : {1e-9, 9.9e-8, 1.01e-7, 1e-6}) {
        const double x = y * (1 + rel);
        // exact value in long double, away from cancellation
        const long double t = static_cast<long double>(x) / y;
        long double exact = 0;
        if (name == "BKM") exact = y * (t - 1) / std::log(t);
        if (name == "SLD") exact = y * (1 + t) / 2;
        if (name == "WY") exact = y * (1 + std::sqrt(t)) * (1 + std::sqrt(t)) / 4;
        CHECK(std::abs(f.mean(x, y) - static_cast<double>(exact)) < 1e-9 * y);
      }
    }
  }
}

TEST_CASE("metric at the maximally mixed qubit is 2 delta for every f") {
  for (const auto& name : monotone_registry()) {
    const auto m = build_state_model(2, name);
    const Point zero{{0, 0, 0}};
    CHECK(max_diff(m.metric_at(zero), 2 * Eigen::Matrix3d::Identity()) < 1e-13);
    CHECK(max_diff(as_matrix(m.metric().at(zero), 3), 2 * Eigen::Matrix3d::Identity()) < 1e-13);
  }
}

TEST_CASE("BKM metric matches the resolvent integral") {
  for (int d : {2, 3}) {
    const auto m = build_state_model(d, "BKM");
    const int n = m.dim();
    for (const auto& p : interior(m, d == 2 ? 20 : 4, 11 + d, 0.02)) {
      const auto rho = m.rho(p.coords);
      Eigen::MatrixXd oracle(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) oracle(i, j) = bkm_oracle(rho, m.basis().A[i], m.basis().A[j]);
      const double scale = oracle.cwiseAbs().maxCoeff();
      CHECK(max_diff(m.metric_at(p), oracle) < 1e-8 * scale);
      CHECK(max_diff(as_matrix(m.metric().at(p), n), oracle) < 1e-8 * scale);
    }
  }
}

TEST_CASE("BKM superoperator inverts the log-mean operator") {
  const auto m = build_state_model(2, "BKM");
  Rng rng(5);
  for (const auto& p : interior(m, 10, 21)) {
    const auto rho = m.rho(p.coords);
    const auto Y = m.tangent(std::vector<double>{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const auto back = m.superoperator(p).apply(log_mean_oracle(rho, Y));
    CHECK((back - Y).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("jet and eigendecomposition routes agree, with derivatives") {
  for (const auto& name : monotone_registry()) {
    const auto m = build_state_model(2, name);
    const MetricField g = m.metric();
    for (const auto& p : interior(m, 8, 31)) {
      CHECK(max_diff(as_matrix(g.at(p), 3), m.metric_at(p)) < 1e-12);
      const auto d = partials(g, constant_jets(p.coords), DiffContext{});
      for (std::size_t k = 0; k < 3; ++k) {
        const auto fd = [&](std::size_t i, std::size_t j) {
          return oracle::derivative(
              [&](double s) { return m.metric_at(Point{oracle::bump(p.coords, k, s)})(i, j); }, 1e-4);
        };
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(d[k][i * 3 + j].value() - fd(i, j)) < 1e-7);
      }
    }
  }
}

TEST_CASE("near-degenerate states: metric is continuous at the maximally mixed point") {
  for (const auto& name : monotone_registry()) {
    const auto m = build_state_model(2, name);
    for (double eps : {1e-12, 1e-9, 1e-7}) {
      const Point p{{eps, -eps, 0.5 * eps}};
      CHECK(max_diff(m.metric_at(p), 2 * Eigen::Matrix3d::Identity()) < 1e-5);
      CHECK(max_diff(as_matrix(m.metric().at(p), 3), m.metric_at(p)) < 1e-10);
    }
  }
}

TEST_CASE("K is self-adjoint and g is positive definite") {
  for (const auto& name : monotone_registry()) {
    const auto m = build_state_model(2, name);
    Rng rng(77);
    for (const auto& p : m.chart()->sample(rng, 100)) {
      const auto k = m.superoperator(p);
      const auto X = m.tangent(std::vector<double>{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
      const auto Y = m.tangent(std::vector<double>{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
      const Cplx a = (X * k.apply(Y)).trace();
      const Cplx b = (k.apply(X) * Y).trace();
      CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
      const auto ky = k.apply(Y);
      CHECK((ky - ky.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, ky.cwiseAbs().maxCoeff()));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.metric_at(p));
      CHECK(es.eigenvalues()(0) > 0);
    }
  }
}

TEST_CASE("state domain") {
  const auto m = build_state_model(2, "SLD");
  Rng rng(3);
  for (const auto& p : m.chart()->sample(rng, 50)) {
    CHECK(m.min_eigenvalue(p.coords) > kMinEigenvalue);
    const auto rho = m.rho(p.coords);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
  const Point pure{{0, 0, 1 / std::sqrt(2.0)}};
  CHECK_FALSE(m.chart()->contains(pure.coords));
  CHECK_THROWS_AS(m.metric_at(pure), DomainError);
  CHECK_THROWS_AS((void)m.metric().at(pure), DomainError);
}

TEST_CASE("vNU relative entropy: classical case and jet route") {
  const auto m = build_state_model(2, "BKM");
  const double r2 = std::sqrt(2.0);
  const Point p{{0, 0, 0.2 * r2}};
  const Point q{{0, 0, 0.1 * r2}};
  const double kl = 0.7 * std::log(0.7 / 0.6) + 0.3 * std::log(0.3 / 0.4);
  CHECK(vnu_relative_entropy(m, p, q) == doctest::Approx(kl).epsilon(1e-13));
  CHECK(kl == doctest::Approx(0.02160).epsilon(1e-3));
  const auto F = vnu_contrast(m);
  Rng rng(8);
  const auto pts = m.chart()->sample(rng, 20);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = F.evaluate(pts[i], pts[i + 1], {}, {});
    CHECK(a == doctest::Approx(vnu_relative_entropy(m, pts[i], pts[i + 1])).epsilon(1e-10));
    CHECK(a >= 0);
    CHECK(std::abs(F.evaluate(pts[i], pts[i], {}, {})) < 1e-13);
  }
}

TEST_CASE("Eguchi metric of the vNU divergence is the BKM metric") {
  const auto m = build_state_model(2, "BKM");
  const auto pts = interior(m, 20, 41);
  // finite differences of the double route, fully independent of the jets
  for (const auto& p : pts) {
    Eigen::Matrix3d g;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        g(i, j) = -oracle::derivative(
            [&](double s) {
              return oracle::derivative(
                  [&](double t) {
                    return vnu_relative_entropy(m, Point{oracle::bump(p.coords, i, s)},
                                                Point{oracle::bump(p.coords, j, t)});
                  },
                  1e-3);
            },
            1e-3);
    CHECK(max_diff(g, m.metric_at(p)) < 1e-6);
  }
  // and through the bi-form calculus
  ProbeOptions opt;
  opt.points = pts;
  const auto w = biform_from_contrast(vnu_contrast(m), opt);
  const auto g = induced_metric(w);
  for (const auto& p : pts) CHECK(max_diff(as_matrix(g.at(p), 3), m.metric_at(p)) < 1e-9);
  CHECK(component_residual(induced_connection(w), pts).max < 1e-5);
}

TEST_CASE("BKM and SLD metrics differ away from the maximally mixed state") {
  const Point p{{0.3, 0, 0}};
  const auto a = build_state_model(2, "BKM").metric_at(p);
  const auto b = build_state_model(2, "SLD").metric_at(p);
  CHECK(max_diff(a, b) > 1e-3);
}

TEST_CASE("canonical bi-form of the mixture coframe") {
  for (const auto& name : monotone_registry()) {
    CAPTURE(name);
    const auto m = build_state_model(2, name);
    ProbeOptions opt;
    opt.points = interior(m, 12, 51, 0.02);
    opt.points.push_back(Point{{0.3, 0, 0}});
    const auto w = quantum_canonical_biform(m, opt);
    const auto g = induced_metric(w);
    for (const auto& p : opt.points) CHECK(max_diff(as_matrix(g.at(p), 3), m.metric_at(p)) < 1e-10);
    CHECK(component_residual(induced_connection(w), opt.points).max < 1e-10);
    CHECK(component_residual(teleparallel_connection(m.mixture_coframe()), opt.points).max == 0.0);
    const auto dual = dual_structure(w);
    CHECK(conjugacy_residual(g, mixture_connection(m), dual.connection, opt.points).max < 1e-8);
    const auto report = verify_inverse_problem(w, m.metric(), mixture_connection(m), m.mixture_coframe());
    CHECK(report.pass);

    const auto c = classify(w);
    const double torsion = torsion_residual(dual.connection, {Point{{0.3, 0, 0}}}).max;
    if (name == "BKM") {
      CHECK(c.kind == StructureClass::Statistical);
      CHECK(torsion < 1e-8);
    } else {
      CHECK(c.kind == StructureClass::Smat);
      CHECK(torsion > 1e-3);
    }
    CHECK(c.proposition.max < 1e-8);
  }
}

TEST_CASE("pre-contrast of the mixture coframe") {
  for (const auto& name : monotone_registry()) {
    CAPTURE(name);
    const auto m = build_state_model(2, name);
    const auto S = quantum_precontrast(m);
    auto pts = interior(m, 15, 61, 0.02);
    pts.push_back(Point{{0, 0, 0}});
    CHECK(component_residual(diagonal_pullback(S), pts).max < 1e-12);
    ProbeOptions opt;
    opt.points = pts;
    const auto w = biform_from_precontrast(S, opt);
    const auto g = induced_metric(w);
    for (const auto& p : pts) CHECK(max_diff(as_matrix(g.at(p), 3), m.metric_at(p)) < 1e-7);
    CHECK(component_residual(induced_connection(w), pts).max < 1e-7);
    CHECK(torsion_residual(induced_connection(w), pts).max < 1e-8);
  }
}

TEST_CASE("dual torsion profile over the registry") {
  std::vector<Point> pts{Point{{0.3, 0, 0}}};
  const auto m = build_state_model(2, "BKM");
  for (const auto& p : interior(m, 6, 71)) pts.push_back(p);
  const auto rows = dual_torsion_profile(m, pts);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].function == "BKM");
  CHECK(rows[0].torsion_free);
  CHECK_FALSE(rows[1].torsion_free);
  CHECK_FALSE(rows[2].torsion_free);
  CHECK(rows[1].dual_torsion.max > 1e-3);
  for (const auto& row : dual_torsion_profile(m, {Point{{0, 0, 0}}})) CHECK(row.dual_torsion.max < 1e-8);
  const auto par = dual_torsion_profile(m, pts, {}, 1e-8, Execution::Parallel);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(par[i].dual_torsion.max == rows[i].dual_torsion.max);
}

TEST_CASE("qutrit smoke") {
  const auto m = build_state_model(3, "BKM");
  CHECK(m.dim() == 8);
  const auto pts = interior(m, 3, 81);
  for (const auto& p : pts) {
    const auto g = m.metric_at(p);
    CHECK(max_diff(as_matrix(m.metric().at(p), 8), g) < 1e-11);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    CHECK(es.eigenvalues()(0) > 0);
  }
  const auto rows = dual_torsion_profile(m, pts);
  CHECK(rows[0].torsion_free);
  CHECK_FALSE(rows[1].torsion_free);
}
