#include <cmath>

#include "biform/corpus.hpp"
#include "biform/errors.hpp"
#include "biform/potentials.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace biform;

namespace {

// Plain-double view of a two-point scalar for the finite-difference oracles.
double F2(const TwoPointScalar& F, const std::vector<double>& m, const std::vector<double>& n) {
  return F.evaluate(Point{m}, Point{n}, {}, {});
}

// -d_{x^i} d_{y^j} F at (x, x), by nested central differences on doubles.
double eguchi_metric_oracle(const TwoPointScalar& F, const std::vector<double>& x, std::size_t i, std::size_t j) {
  const double h = 1e-4;
  auto f = [&](double s, double t) {
    auto m = x, n = x;
    m[i] += s;
    n[j] += t;
    return F2(F, m, n);
  };
  return -(f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
}

// -d_{x^i} d_{x^j} d_{y^k} F at (x, x).
double eguchi_lowered_oracle(const TwoPointScalar& F, const std::vector<double>& x, std::size_t i, std::size_t j,
                             std::size_t k) {
  const double h = 1e-3;
  auto f = [&](double a, double b, double c) {
    auto m = x, n = x;
    m[i] += a;
    m[j] += b;
    n[k] += c;
    return F2(F, m, n);
  };
  double s = 0;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1}) s += a * b * c * f(a * h, b * h, c * h);
  return -s / (8 * h * h * h);
}

ProbeOptions probes_of(std::vector<Point> pts) {
  ProbeOptions o;
  o.points = std::move(pts);
  return o;
}

}  // namespace

TEST_CASE("squared Euclidean contrast: identity metric and flat connections") {
  auto c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}});
  const ContrastBiForm w = biform_from_contrast(squared_euclidean(c));
  CHECK(w.warnings().empty());
  const Point p{{0.3, -0.4}};
  const auto g = induced_metric(w).at(p);
  CHECK(g == std::vector<double>{1, 0, 0, 1});
  CHECK(max_abs(induced_connection(w).at(p)) == 0.0);
  CHECK(max_abs(dual_structure(w).connection.at(p)) == 0.0);
  CHECK(classify(w).kind == StructureClass::Statistical);
}

TEST_CASE("zero contrast and zero pre-contrast are rejected") {
  auto c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}});
  CHECK_THROWS_AS(biform_from_contrast(parse_two_point_scalar(c, "0")), ContrastError);
  CHECK_THROWS_AS(biform_from_precontrast(BiForm(c, 0, 1,
                                                 [](std::span<const Jet>, std::span<const Jet>, const DiffContext&) {
                                                   return JetVec(2);
                                                 })),
                  ContrastError);
  try {
    biform_from_contrast(parse_two_point_scalar(c, "0"));
  } catch (const ContrastError& e) {
    CHECK(std::string(e.what()).find("probe point (") != std::string::npos);
  }
}

TEST_CASE("pre-contrast -d^R F gives the same bi-form as the contrast route") {
  auto c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}});
  Rng rng(3);
  const TwoPointScalar F = random_bregman(c, rng);
  const ContrastBiForm a = biform_from_contrast(F);
  const ContrastBiForm b = biform_from_precontrast(kContrastSign * right_differential(F));
  for (const auto& p : c->sample(rng, 5)) {
    const auto q = c->sample(rng, 1)[0];
    CHECK(a.form().evaluate(p, q, {{1, 0.5}}, {{-0.3, 2}}) == b.form().evaluate(p, q, {{1, 0.5}}, {{-0.3, 2}}));
  }
}

TEST_CASE("signature (1,1) metric from constant coefficients") {
  auto c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}});
  const OneForm dx = constant_one_form(c, {1, 0}), dy = constant_one_form(c, {0, 1});
  const ContrastBiForm w(tensor_sum({dx, dy}, {dy, dx}));
  CHECK(induced_metric(w).at(Point{{0.1, 0.2}}) == std::vector<double>{0, 1, 1, 0});
}

TEST_CASE("asymmetric pullback is not a contrast bi-form") {
  auto c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}});
  const OneForm dx = constant_one_form(c, {1, 0}), dy = constant_one_form(c, {0, 1});
  CHECK_THROWS_AS(ContrastBiForm(tensor_sum({dx, dx, dy}, {dx, dy, dy})), ContrastError);
  CHECK_THROWS_AS(ContrastBiForm(tensor_sum({dx}, {dx}) + tensor_sum({dy}, {dy}) + tensor_sum({dx}, {dy})),
                  ContrastError);
  CHECK_THROWS_AS(ContrastBiForm(left_pullback(dx)), ContrastError);
}

TEST_CASE("Gaussian KL: Fisher metric, Eguchi Christoffels, dual pair") {
  auto c = gaussian_chart();
  const TwoPointScalar F = gaussian_kl(c);
  ProbeOptions o;
  o.count = 20;
  o.seed = 99;
  const ContrastBiForm w = biform_from_contrast(F, o);
  CHECK(w.warnings().empty());
  const MetricField g = induced_metric(w);
  const Connection nabla = induced_connection(w);
  const DualStructure dual = dual_structure(w);
  double metric_err = 0, oracle_err = 0, conn_err = 0;
  for (const auto& p : w.probes()) {
    const double s = p.coords[1];
    const auto gv = g.at(p);
    metric_err = std::max({metric_err, std::abs(gv[0] - 1 / (s * s)), std::abs(gv[1]), std::abs(gv[2]),
                           std::abs(gv[3] - 2 / (s * s))});
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        oracle_err = std::max(oracle_err, std::abs(gv[i * 2 + j] - eguchi_metric_oracle(F, p.coords, i, j)));
    const auto gam = nabla.at(p);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t l = 0; l < 2; ++l) {
          // raise the oracle's lowered symbol with the closed-form inverse Fisher metric
          const double ginv = l == 0 ? s * s : s * s / 2;
          const double expect = ginv * eguchi_lowered_oracle(F, p.coords, i, j, l);
          conn_err = std::max(conn_err, std::abs(gam[(l * 2 + i) * 2 + j] - expect));
        }
  }
  CHECK(metric_err < 1e-6);
  CHECK(oracle_err < 1e-6);
  CHECK(conn_err < 1e-5);
  CHECK(conjugacy_residual(g, nabla, dual.connection, w.probes()).max < 1e-8);
  const Classification k = classify(w);
  CHECK(k.kind == StructureClass::Statistical);
  CHECK(k.proposition.max < 1e-8);
}

TEST_CASE("conjugate of the induced connection is the swap-induced connection") {
  auto c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}});
  Rng rng(55);
  const ContrastBiForm w = biform_from_precontrast(random_precontrast(c, rng), probes_of(c->sample(rng, 10)));
  const MetricField g = induced_metric(w);
  const Connection dual = conjugate_connection(g, induced_connection(w));
  const Connection swapped = dual_structure(w).connection;
  double worst = 0;
  for (const auto& p : w.probes()) {
    const auto a = dual.at(p), b = swapped.at(p);
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("left-exact bi-forms give torsion-free connections") {
  auto c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}});
  Rng rng(8);
  double torsion = 0, prop = 0, dual_torsion = 0;
  int smat = 0;
  for (int k = 0; k < 20; ++k) {
    ProbeOptions o;
    o.count = 10;
    o.seed = 100 + static_cast<std::uint64_t>(k);
    const ContrastBiForm w = biform_from_precontrast(random_precontrast(c, rng), o);
    torsion = std::max(torsion, torsion_residual(induced_connection(w), w.probes()).max);
    const Classification cl = classify(w);
    prop = std::max(prop, cl.proposition.max);
    dual_torsion = std::max(dual_torsion, torsion_residual(dual_structure(w).connection, w.probes()).max);
    smat += cl.kind == StructureClass::Smat;
  }
  CHECK(torsion < 1e-8);
  CHECK(prop < 1e-8);
  // the random corpus is generic: duals carry torsion
  CHECK(dual_torsion > 1e-3);
  CHECK(smat == 20);
}

TEST_CASE("bi-exact bi-forms give statistical manifolds") {
  auto c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}});
  Rng rng(9);
  double left = 0, right = 0, asym = 0;
  for (int k = 0; k < 20; ++k) {
    const TwoPointScalar F = k % 2 ? random_bregman(c, rng) : random_symmetric_two_point(c, rng);
    ProbeOptions o;
    o.count = 10;
    o.seed = 200 + static_cast<std::uint64_t>(k);
    const ContrastBiForm w = biform_from_contrast(F, o);
    if (k % 2) CHECK(w.warnings().empty());
    left = std::max(left, torsion_residual(induced_connection(w), w.probes()).max);
    right = std::max(right, torsion_residual(dual_structure(w).connection, w.probes()).max);
    asym = std::max(asym, symmetry_residual(w).max);
    CHECK(classify(w).kind == StructureClass::Statistical);
  }
  CHECK(left < 1e-8);
  CHECK(right < 1e-8);
  CHECK(asym < 1e-9);
}

TEST_CASE("central-difference mode reproduces the jet classification") {
  auto c = gaussian_chart();
  ProbeOptions o;
  o.count = 5;
  o.ctx.config.mode = DiffMode::CentralDifference;
  o.ctx.config.fd_step = 1e-3;
  const ContrastBiForm w = biform_from_contrast(gaussian_kl(c), o);
  const Classification k = classify(w);
  CHECK(k.tol == 1e-4);
  CHECK(k.kind == StructureClass::Statistical);
  const double s = w.probes()[0].coords[1];
  CHECK(induced_metric(w).at(w.probes()[0], o.ctx)[3] == doctest::Approx(2 / (s * s)).epsilon(1e-5));
}

TEST_CASE("probe sweeps agree between serial and parallel execution") {
  auto c = gaussian_chart();
  ProbeOptions o;
  o.count = 16;
  const ContrastBiForm a = biform_from_contrast(gaussian_kl(c), o);
  o.exec = Execution::Parallel;
  const ContrastBiForm b = biform_from_contrast(gaussian_kl(c), o);
  const Classification ka = classify(a), kb = classify(b);
  CHECK(ka.left.max == kb.left.max);
  CHECK(ka.right.mean == kb.right.mean);
  CHECK(ka.proposition.max == kb.proposition.max);
}
