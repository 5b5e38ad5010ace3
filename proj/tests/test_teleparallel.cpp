#include <cmath>

#include "biform/errors.hpp"
#include "biform/teleparallel.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace biform;

namespace {

ChartPtr plane() { return ChartManifold::euclidean(2, {{-1.5, -1.5}, {1.5, 1.5}}, "R2"); }
MetricField euclid(const ChartPtr& c) { return constant_metric(c, Eigen::Matrix2d::Identity()); }

std::vector<Point> probes(const ChartPtr& c, int n, std::uint64_t seed) {
  Rng rng(seed);
  return c->sample(rng, n);
}

struct Case {
  const char* name;
  MetricField g;
  Coframe B;
  bool closed;
};

std::vector<Case> corpus() {
  auto p = plane();
  auto a = annulus_chart();
  return {{"cartesian", euclid(p), cartesian_coframe(p), true},
          {"exponential", euclid(p), exponential_coframe(p), false},
          {"polar-cartesian", polar_metric(a), polar_cartesian_coframe(a), true},
          {"polar-orthonormal", polar_metric(a), polar_orthonormal_coframe(a), false}};
}

}  // namespace

TEST_CASE("teleparallel connection examples") {
  auto c = plane();
  const Point p{{0.3, -0.8}};
  CHECK(max_abs(teleparallel_connection(cartesian_coframe(c)).at(p)) == 0.0);
  const auto gam = teleparallel_connection(exponential_coframe(c)).at(p);
  for (std::size_t k = 0; k < 8; ++k) CHECK(gam[k] == doctest::Approx(k == 1 * 4 + 0 * 2 + 1 ? 1.0 : 0.0));
  const auto t = torsion_of_fields(teleparallel_connection(exponential_coframe(c)), coordinate_vector(c, 0),
                                   coordinate_vector(c, 1))
                     .at(p);
  CHECK(t[0] == doctest::Approx(0).epsilon(1e-15));
  CHECK(std::abs(t[1] - 1.0) < 1e-9);
}

TEST_CASE("covariant constancy and torsion-closedness on the corpus") {
  for (const auto& cs : corpus()) {
    CAPTURE(cs.name);
    const auto pts = probes(cs.B.chart(), 100, 7);
    const Connection nabla = teleparallel_connection(cs.B);
    CHECK(covariant_constancy_residual(nabla, cs.B, pts).max < 1e-9);
    const double tor = torsion_residual(nabla, pts).max;
    const double d = closedness_residual(cs.B, pts).max;
    if (cs.closed) {
      CHECK(tor < 1e-9);
      CHECK(d < 1e-9);
    } else {
      CHECK(tor > 1e-3);
      CHECK(d > 1e-3);
    }
  }
}

TEST_CASE("gradient frame examples") {
  auto c = plane();
  const Point p{{0.2, 0.4}};
  const GradientFrame e = gradient_frame(euclid(c), cartesian_coframe(c));
  CHECK(e.Z[0].at(p) == std::vector<double>{1, 0});
  CHECK(e.beta[1].at(p) == std::vector<double>{0, 1});
  const GradientFrame d = gradient_frame(constant_metric(c, Eigen::Vector2d(1, 4).asDiagonal()), cartesian_coframe(c));
  CHECK(d.Z[1].at(p)[1] == doctest::Approx(0.25));
  CHECK(d.beta[1].at(p)[1] == doctest::Approx(4.0));
  CHECK(frame_duality_residual(d, {p}).max < 1e-10);
}

TEST_CASE("canonical bi-form values") {
  auto c = plane();
  const ContrastBiForm w = canonical_biform(euclid(c), cartesian_coframe(c));
  const Point m{{0.1, 0.9}}, n{{-1.0, 0.3}};
  CHECK(w.form().evaluate(m, n, {{1, 0}}, {{1, 0}}) == 1.0);
  CHECK(w.form().evaluate(m, n, {{1, 0}}, {{0, 1}}) == 0.0);
  CHECK(induced_metric(w).at(m) == std::vector<double>{1, 0, 0, 1});
  const ContrastBiForm e = canonical_biform(euclid(c), exponential_coframe(c));
  CHECK(e.form().evaluate(m, n, {{0, 1}}, {{0, 1}}) == doctest::Approx(std::exp(0.1) * std::exp(1.0)));
}

TEST_CASE("canonical bi-form on random metrics and coframes") {
  auto c = plane();
  Rng rng(13);
  double pull = 0, relation = 0, duality = 0;
  for (int k = 0; k < 10; ++k) {
    const Coframe B = random_coframe(c, rng);
    const VectorField v = random_vector_field(c, rng);
    const MetricField g(c, [v](std::span<const Jet> x, const DiffContext& ctx) {
      const JetVec a = v.eval(x, ctx);
      return JetVec{1.0 + 0.2 * a[0] * a[0], 0.2 * a[0] * a[1], 0.2 * a[0] * a[1], 1.0 + 0.2 * a[1] * a[1]};
    });
    ProbeOptions o;
    o.count = 10;
    o.seed = static_cast<std::uint64_t>(k);
    const ContrastBiForm w = canonical_biform(g, B, o);
    for (const auto& p : w.probes()) {
      const auto a = induced_metric(w).at(p), b = g.at(p);
      for (std::size_t i = 0; i < 4; ++i) pull = std::max(pull, std::abs(a[i] - b[i]));
    }
    relation = std::max(relation, frame_relation_residual(g, B, w.probes()).max);
    duality = std::max(duality, frame_duality_residual(gradient_frame(g, B), w.probes()).max);
    // the canonical bi-form always induces the teleparallel connection
    CHECK(verify_inverse_problem(w, g, teleparallel_connection(B), B).pass);
  }
  CHECK(pull < 1e-9);
  CHECK(relation < 1e-9);
  CHECK(duality < 1e-10);
}

TEST_CASE("inverse problem: canonical solution passes, violations fail") {
  for (const auto& cs : corpus()) {
    CAPTURE(cs.name);
    ProbeOptions o;
    o.count = 20;
    const ContrastBiForm w = canonical_biform(cs.g, cs.B, o);
    const InverseProblemReport r = verify_inverse_problem(w, cs.g, teleparallel_connection(cs.B), cs.B);
    CHECK(r.pass);
    CHECK(r.connection.max < 1e-8);
    CHECK(r.metric.max < 1e-8);
    CHECK(r.exterior.max < 1e-8);
    // the induced connection is the teleparallel one
    double diff = 0;
    for (const auto& p : w.probes()) {
      const auto a = induced_connection(w).at(p), b = teleparallel_connection(cs.B).at(p);
      for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    }
    CHECK(diff < 1e-10);

    const OneForm d0 = constant_one_form(cs.B.chart(), {1, 0});
    const ContrastBiForm bad(w.form() + tensor_sum({d0}, {d0}), o);
    const InverseProblemReport rb = verify_inverse_problem(bad, cs.g, teleparallel_connection(cs.B), cs.B);
    CHECK_FALSE(rb.pass);
    CHECK(rb.metric.max > 1e-3);
  }
}

TEST_CASE("Levi-Civita of a non-flat metric fails the connection line") {
  auto c = plane();
  const MetricField g = metric_field(c, {parse_scalar_field(c, "1 + 0.3*y^2"), constant_scalar(c, 0),
                                         constant_scalar(c, 0), parse_scalar_field(c, "exp(0.5*x)")});
  const Coframe B = exponential_coframe(c);
  ProbeOptions o;
  o.count = 20;
  const ContrastBiForm w = canonical_biform(g, B, o);
  const InverseProblemReport r = verify_inverse_problem(w, g, levi_civita(g), B);
  CHECK_FALSE(r.pass);
  CHECK(r.connection.max > 1e-3);
  CHECK(r.metric.max < 1e-8);
  CHECK(verify_inverse_problem(w, g, teleparallel_connection(B), B).pass);
}

TEST_CASE("frame coefficients reproduce the bi-form") {
  auto c = plane();
  const MetricField g = metric_field(c, {parse_scalar_field(c, "2 + sin(x)"), parse_scalar_field(c, "0.1*y"),
                                         parse_scalar_field(c, "0.1*y"), parse_scalar_field(c, "1 + x^2")});
  const Coframe B = exponential_coframe(c);
  const GradientFrame f = gradient_frame(g, B);
  const ContrastBiForm w = canonical_biform(g, B);
  const BiForm rebuilt = biform_from_frame_coefficients(f, canonical_coefficients(g, f));
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const auto pts = c->sample(rng, 2);
    const std::vector<double> u{rng.uniform(-1, 1), rng.uniform(-1, 1)}, v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(rebuilt.evaluate(pts[0], pts[1], {u}, {v}) ==
          doctest::Approx(w.form().evaluate(pts[0], pts[1], {u}, {v})).epsilon(1e-12));
  }
}

TEST_CASE("classification of teleparallel bi-forms") {
  for (const auto& cs : corpus()) {
    CAPTURE(cs.name);
    ProbeOptions o;
    o.count = 20;
    const ContrastBiForm w = canonical_biform(cs.g, cs.B, o);
    const Classification k = classify(w);
    CHECK(k.proposition.max < 1e-8);
    const double tor = torsion_residual(induced_connection(w), w.probes()).max;
    const double dual = torsion_residual(dual_structure(w).connection, w.probes()).max;
    const bool l = tor < k.tol, r = dual < k.tol;
    const StructureClass expect = l && r ? StructureClass::Statistical
                                  : l    ? StructureClass::Smat
                                  : r    ? StructureClass::DualSmat
                                         : StructureClass::Lauritzen;
    CHECK(k.kind == expect);
  }
  auto c = plane();
  CHECK(classify(canonical_biform(euclid(c), exponential_coframe(c))).kind == StructureClass::Lauritzen);
}

TEST_CASE("degenerate coframe is reported with the point") {
  auto c = plane();
  const Coframe B(c, {constant_one_form(c, {1, 0}), one_form(c, {constant_scalar(c, 0), parse_scalar_field(c, "x")})});
  CHECK_THROWS_AS(B.require_frame({Point{{0.0, 0.3}}}), FrameError);
  CHECK_THROWS_AS(teleparallel_connection(B).at(Point{{0.0, 0.3}}), FrameError);
  CHECK_THROWS_AS(Coframe(c, {constant_one_form(c, {1, 0})}), FrameError);
}
