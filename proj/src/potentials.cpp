#include "biform/potentials.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace biform {
namespace {

Eigen::MatrixXd square(const std::vector<double>& v, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  return m;
}

double asymmetry(const Eigen::MatrixXd& g) { return (g - g.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

double ProbeOptions::symmetry_threshold(const DiffContext& c) const {
  return c.config.mode == DiffMode::TaylorJet ? symmetry_tol : std::max(symmetry_tol, classify_tolerance(c));
}

std::vector<Point> ProbeOptions::resolve(const ChartManifold& chart) const {
  if (!points.empty()) {
    for (const auto& p : points) chart.require(p.coords);
    return points;
  }
  Rng rng(seed);
  return chart.sample(rng, count);
}

ContrastBiForm::ContrastBiForm(BiForm form, ProbeOptions probes)
    : form_(std::move(form)), options_(std::move(probes)) {
  if (form_.left_degree() != 1 || form_.right_degree() != 1)
    throw ContrastError("contrast bi-form must have degree (1,1), got (" + std::to_string(form_.left_degree()) +
                        "," + std::to_string(form_.right_degree()) + ")");
  probes_ = options_.resolve(*form_.chart());
  const auto pull = diagonal_pullback(form_);
  const int n = form_.dim();
  for (const auto& p : probes_) {
    const Eigen::MatrixXd g = square(pull.components(p, options_.ctx), n);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if (!(asymmetry(g) <= options_.symmetry_threshold(options_.ctx) * scale))
      throw ContrastError("induced metric is not symmetric at " + format_coords(p.coords) + " (asymmetry " +
                          std::to_string(asymmetry(g)) + ")");
    const double rc = inverse_condition(g);
    if (!(rc > options_.min_rcond))
      throw ContrastError("not a contrast: induced metric is degenerate at probe point " + format_coords(p.coords) +
                          " (inverse condition estimate " + std::to_string(rc) + ")");
  }
}

ContrastBiForm biform_from_contrast(const TwoPointScalar& F, const ProbeOptions& probes) {
  if (F.left_degree() != 0 || F.right_degree() != 0)
    throw ArityError("biform_from_contrast: expected a two-point scalar");
  ContrastBiForm w(kContrastSign * left_differential(right_differential(F)), probes);
  // Contrast-function normalization is reported, never enforced.
  const BlockAlternatingTensor f0 = diagonal_pullback(F);
  const BlockAlternatingTensor f1 = diagonal_pullback(left_differential(F));
  double worst0 = 0, worst1 = 0;
  for (const auto& p : w.probes()) {
    worst0 = std::max(worst0, max_abs(f0.components(p, probes.ctx)));
    worst1 = std::max(worst1, max_abs(f1.components(p, probes.ctx)));
  }
  const double tol = classify_tolerance(probes.ctx);
  if (worst0 > tol) w.add_warning("F does not vanish on the diagonal (max " + std::to_string(worst0) + ")");
  if (worst1 > tol)
    w.add_warning("first derivatives of F do not vanish on the diagonal (max " + std::to_string(worst1) + ")");
  return w;
}

ContrastBiForm biform_from_precontrast(const PreContrastBiForm& S, const ProbeOptions& probes) {
  if (S.left_degree() != 0 || S.right_degree() != 1)
    throw ArityError("biform_from_precontrast: expected a (0,1) bi-form");
  return ContrastBiForm(left_differential(S), probes);
}

MetricField induced_metric(const ContrastBiForm& cw) {
  const BiForm w = cw.form();
  const ProbeOptions opt = cw.options();
  return MetricField(w.chart(), [w, opt](std::span<const Jet> x, const DiffContext& ctx) {
    const double tol = opt.symmetry_threshold(ctx);
    JetVec g = w.coefficients(x, x, ctx);
    const std::size_t n = x.size();
    double scale = 1.0, worst = 0.0;
    for (const auto& v : g) scale = std::max(scale, std::abs(v.value()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) worst = std::max(worst, std::abs(g[i * n + j].value() - g[j * n + i].value()));
    if (worst > tol * scale)
      throw ContrastError("invalid contrast bi-form: induced metric asymmetric at " + format_coords(values(x)));
    return g;
  });
}

Connection induced_connection(const ContrastBiForm& cw) {
  const BiForm w = cw.form();
  const MetricField g = induced_metric(cw);
  return Connection(w.chart(), [w, g](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const RJetMatrix ginv = checked_inverse(metric_matrix(g, x, ctx), x, "induced_connection");
    JetVec low(n * n * n);
    for (std::size_t i = 0; i < n; ++i) {
      // left-slot derivative only: the right point stays at x
      const JetVec d = derive(ctx, [&](const Jet& t, const DiffContext& inner) {
        JetVec m(x.begin(), x.end());
        m[i] += t;
        return w.coefficients(m, x, inner);
      });
      for (std::size_t jk = 0; jk < n * n; ++jk) low[i * n * n + jk] = d[jk];
    }
    return raise_christoffels(low, ginv, n);
  });
}

DualStructure dual_structure(const ContrastBiForm& w) {
  ProbeOptions o = w.options();
  o.points = w.probes();
  const ContrastBiForm dual(swap_pullback(w.form()), o);
  return {induced_metric(dual), induced_connection(dual)};
}

const char* structure_name(StructureClass c) {
  switch (c) {
    case StructureClass::Statistical: return "STATISTICAL";
    case StructureClass::Smat: return "SMAT";
    case StructureClass::DualSmat: return "DUAL_SMAT";
    case StructureClass::Lauritzen: return "LAURITZEN";
  }
  return "?";
}

double classify_tolerance(const DiffContext& ctx) {
  return ctx.config.mode == DiffMode::TaylorJet ? 1e-7 : 1e-4;
}

SweepStats component_residual(const BlockAlternatingTensor& t, const std::vector<Point>& probes,
                              const DiffContext& ctx, Execution exec) {
  return sweep(probes, [&](const Point& p) { return max_abs(t.components(p, ctx)); }, exec);
}

Classification classify(const ContrastBiForm& w, double tol) {
  const auto& probes = w.probes();
  const auto& ctx = w.context();
  const Execution exec = w.options().exec;
  Classification c{};
  c.tol = tol < 0 ? classify_tolerance(ctx) : tol;
  const BlockAlternatingTensor left = diagonal_pullback(left_differential(w.form()));
  const BlockAlternatingTensor right = diagonal_pullback(right_differential(w.form()));
  c.left = component_residual(left, probes, ctx, exec);
  c.right = component_residual(right, probes, ctx, exec);
  const LoweredTorsion lowered = lower_torsion(torsion_tensor(induced_connection(w)), induced_metric(w));
  c.proposition = sweep(
      probes,
      [&](const Point& p) {
        const auto a = left.components(p, ctx);
        const auto b = lowered.at(p, ctx);
        double m = 0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
      },
      exec);
  const bool l = c.left.max < c.tol, r = c.right.max < c.tol;
  c.kind = l && r ? StructureClass::Statistical
           : l    ? StructureClass::Smat
           : r    ? StructureClass::DualSmat
                  : StructureClass::Lauritzen;
  return c;
}

SweepStats torsion_residual(const Connection& nabla, const std::vector<Point>& probes, const DiffContext& ctx,
                            Execution exec) {
  return component_residual(torsion_tensor(nabla), probes, ctx, exec);
}

SweepStats conjugacy_residual(const MetricField& g, const Connection& nabla, const Connection& dual,
                              const std::vector<Point>& probes, const DiffContext& ctx, Execution exec) {
  const ChartPtr& c = g.chart();
  const int n = c->dim();
  std::vector<ScalarField> defects;
  for (int z = 0; z < n; ++z)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        defects.push_back(conjugacy_defect(g, nabla, dual, coordinate_vector(c, z), coordinate_vector(c, x),
                                           coordinate_vector(c, y)));
  return sweep(
      probes,
      [&](const Point& p) {
        double m = 0;
        for (const auto& d : defects) m = std::max(m, std::abs(d.at(p, ctx)[0]));
        return m;
      },
      exec);
}

SweepStats symmetry_residual(const ContrastBiForm& w) {
  const auto pull = diagonal_pullback(w.form());
  const int n = w.chart()->dim();
  return sweep(
      w.probes(), [&](const Point& p) { return asymmetry(square(pull.components(p, w.context()), n)); },
      w.options().exec);
}

}  // namespace biform
