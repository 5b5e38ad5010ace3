#include "biform/geometry.hpp"

#include <cmath>

#include "biform/expression.hpp"

namespace biform {
namespace {

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* op) {
  if (a == b) return;
  if (a->dim() != b->dim() || a->label() != b->label())
    throw ChartMismatchError(std::string(op) + ": fields live on different charts (" + a->label() +
                             " vs " + b->label() + ")");
}

JetVec shifted(std::span<const Jet> x, const Jet& t, std::span<const Jet> direction) {
  JetVec y(x.begin(), x.end());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += t * direction[k];
  return y;
}

std::vector<std::string> chart_variables(int dim) {
  std::vector<std::string> v;
  for (int i = 0; i < dim; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

}  // namespace

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

// ---------------------------------------------------------------------------
// ChartManifold

ChartManifold::ChartManifold(int dim, Predicate domain, Box box, std::string label)
    : dim_(dim), domain_(std::move(domain)), box_(std::move(box)), label_(std::move(label)) {
  if (dim_ < 1) throw Error("ChartManifold: dim must be >= 1");
  if (box_.lo.size() != static_cast<std::size_t>(dim_) || box_.hi.size() != box_.lo.size())
    throw Error("ChartManifold: sampling box has wrong dimension");
  for (int i = 0; i < dim_; ++i)
    if (!(box_.lo[i] < box_.hi[i])) throw Error("ChartManifold: empty sampling box");
}

ChartPtr ChartManifold::euclidean(int dim, Box box, std::string label) {
  return std::make_shared<const ChartManifold>(
      dim, [](std::span<const double> x) {
        for (double v : x)
          if (!std::isfinite(v)) return false;
        return true;
      },
      std::move(box), std::move(label));
}

ChartPtr ChartManifold::open_box(Box box, std::string label) {
  const int dim = static_cast<int>(box.lo.size());
  return std::make_shared<const ChartManifold>(
      dim,
      [lo = box.lo, hi = box.hi](std::span<const double> x) {
        for (std::size_t i = 0; i < x.size(); ++i)
          if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
        return true;
      },
      box, std::move(label));
}

bool ChartManifold::contains(std::span<const double> x) const {
  return x.size() == static_cast<std::size_t>(dim_) && domain_(x);
}

void ChartManifold::require(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim_))
    throw DomainError(label_ + ": point has " + std::to_string(x.size()) + " coordinates, chart has " +
                      std::to_string(dim_));
  if (!domain_(x)) throw DomainError(label_ + ": point " + format_coords(x) + " is outside the domain");
}

std::vector<Point> ChartManifold::sample(Rng& rng, int count, double margin) const {
  if (!(margin > 0 && margin <= 1)) throw Error("ChartManifold::sample: margin must be in (0, 1]");
  std::vector<Point> out;
  std::vector<double> x(static_cast<std::size_t>(dim_)), outer(x.size());
  long attempts = 0;
  const long max_attempts = 100000L * std::max(count, 1);
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > max_attempts)
      throw DomainError(label_ + ": rejection sampling found no domain points in the box");
    for (int i = 0; i < dim_; ++i) {
      const double c = 0.5 * (box_.lo[i] + box_.hi[i]);
      const double h = 0.5 * (box_.hi[i] - box_.lo[i]) * margin;
      x[i] = rng.uniform(c - h, c + h);
      outer[i] = c + (x[i] - c) / margin;
    }
    if (domain_(x) && domain_(outer)) out.push_back(Point{x});
  }
  return out;
}

double ChartManifold::ball_escape_fraction(const Point& p, double radius, int samples, Rng& rng) const {
  int escaped = 0;
  std::vector<double> y(p.coords.size()), dir(p.coords.size());
  for (int s = 0; s < samples; ++s) {
    double n2 = 0;
    for (auto& d : dir) {
      d = rng.normal();
      n2 += d * d;
    }
    const double r = radius * std::pow(rng.uniform(), 1.0 / dim_) / std::sqrt(n2);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = p.coords[i] + r * dir[i];
    if (!domain_(y)) ++escaped;
  }
  return samples > 0 ? static_cast<double>(escaped) / samples : 0.0;
}

// ---------------------------------------------------------------------------
// Construction helpers

ScalarField scalar_field(ChartPtr chart, JetFunction f) {
  return ScalarField(std::move(chart), [f = std::move(f)](std::span<const Jet> x, const DiffContext&) {
    return JetVec{f(x)};
  });
}

ScalarField constant_scalar(ChartPtr chart, double c) {
  return ScalarField(std::move(chart), [c](std::span<const Jet>, const DiffContext&) { return JetVec{Jet(c)}; });
}

ScalarField black_box_scalar(ChartPtr chart, std::function<double(std::span<const double>)> f) {
  return ScalarField(std::move(chart), [f = std::move(f)](std::span<const Jet> x, const DiffContext&) {
    for (const auto& v : x)
      if (!v.is_constant())
        throw JetOrderError("black-box field cannot be differentiated in jet mode; use central differences");
    const std::vector<double> xv = values(x);
    return JetVec{Jet(f(xv))};
  });
}

ScalarField parse_scalar_field(ChartPtr chart, const std::string& expression) {
  std::vector<std::string> vars = chart_variables(chart->dim());
  const char* const alias[] = {"x", "y", "z"};
  if (chart->dim() <= 3)
    for (int i = 0; i < chart->dim(); ++i) vars.push_back(alias[i]);
  const auto e = std::make_shared<Expression>(Expression::parse(expression, vars));
  const int dim = chart->dim();
  return scalar_field(std::move(chart), [e, dim](std::span<const Jet> x) {
    JetVec v(x.begin(), x.end());
    if (dim <= 3)
      for (int i = 0; i < dim; ++i) v.push_back(x[static_cast<std::size_t>(i)]);
    return e->eval(v);
  });
}

namespace {
template <class Field>
Field from_components(ChartPtr chart, const std::vector<ScalarField>& comps, const char* what) {
  const std::size_t need = ipow(chart->dim(), Field::rank);
  if (comps.size() != need)
    throw ArityError(std::string(what) + ": expected " + std::to_string(need) + " components, got " +
                     std::to_string(comps.size()));
  for (const auto& c : comps) require_same_chart(chart, c.chart(), what);
  return Field(std::move(chart), [comps](std::span<const Jet> x, const DiffContext& ctx) {
    JetVec out;
    out.reserve(comps.size());
    for (const auto& c : comps) out.push_back(c.eval(x, ctx)[0]);
    return out;
  });
}

template <class Field>
Field constant_components(ChartPtr chart, std::vector<double> v, const char* what) {
  if (v.size() != ipow(chart->dim(), Field::rank)) throw ArityError(std::string(what) + ": wrong component count");
  return Field(std::move(chart), [v = std::move(v)](std::span<const Jet>, const DiffContext&) {
    return JetVec(v.begin(), v.end());
  });
}
}  // namespace

VectorField vector_field(ChartPtr chart, const std::vector<ScalarField>& components) {
  return from_components<VectorField>(std::move(chart), components, "vector_field");
}
VectorField constant_vector(ChartPtr chart, std::vector<double> components) {
  return constant_components<VectorField>(std::move(chart), std::move(components), "constant_vector");
}
VectorField coordinate_vector(ChartPtr chart, int k) {
  std::vector<double> v(static_cast<std::size_t>(chart->dim()), 0.0);
  v.at(static_cast<std::size_t>(k)) = 1.0;
  return constant_vector(std::move(chart), std::move(v));
}
OneForm one_form(ChartPtr chart, const std::vector<ScalarField>& components) {
  return from_components<OneForm>(std::move(chart), components, "one_form");
}
OneForm constant_one_form(ChartPtr chart, std::vector<double> components) {
  return constant_components<OneForm>(std::move(chart), std::move(components), "constant_one_form");
}
OneForm differential(const ScalarField& f) {
  return OneForm(f.chart(), [f](std::span<const Jet> x, const DiffContext& ctx) {
    JetVec out;
    for (const auto& d : partials(f, x, ctx)) out.push_back(d[0]);
    return out;
  });
}
MetricField metric_field(ChartPtr chart, const std::vector<ScalarField>& entries) {
  return from_components<MetricField>(std::move(chart), entries, "metric_field");
}
MetricField constant_metric(ChartPtr chart, const Eigen::MatrixXd& g) {
  const int n = chart->dim();
  if (g.rows() != n || g.cols() != n) throw ArityError("constant_metric: wrong matrix size");
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v.push_back(g(i, j));
  return constant_components<MetricField>(std::move(chart), std::move(v), "constant_metric");
}
Connection connection_field(ChartPtr chart, const std::vector<ScalarField>& christoffels) {
  return from_components<Connection>(std::move(chart), christoffels, "connection_field");
}
Connection flat_connection(ChartPtr chart) {
  const std::size_t n = ipow(chart->dim(), 3);
  return constant_components<Connection>(std::move(chart), std::vector<double>(n, 0.0), "flat_connection");
}

// ---------------------------------------------------------------------------
// Pointwise helpers

RJetMatrix metric_matrix(const MetricField& g, std::span<const Jet> x, const DiffContext& ctx) {
  const int n = g.dim();
  const JetVec e = g.eval(x, ctx);
  RJetMatrix m = RJetMatrix::from_entries(n, n, e);
  const Eigen::MatrixXd& v = m.value();
  const double scale = 1.0 + v.cwiseAbs().maxCoeff();
  // central-difference mixed partials are symmetric only to O(h^2)
  const double tol = ctx.config.mode == DiffMode::TaylorJet ? 1e-9 : 1e-4;
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw Error("metric is not symmetric at " + format_coords(values(x)));
  return m;
}

RJetMatrix checked_inverse(const RJetMatrix& m, std::span<const Jet> x, const char* what) {
  try {
    return m.inverse();
  } catch (const LinearSolveError& e) {
    throw LinearSolveError(std::string(what) + ": " + e.what() + " at " + format_coords(values(x)),
                           e.condition());
  }
}

// ---------------------------------------------------------------------------
// Operators

ScalarField directional_derivative(const ScalarField& f, const VectorField& X) {
  require_same_chart(f.chart(), X.chart(), "directional_derivative");
  return ScalarField(f.chart(), [f, X](std::span<const Jet> x, const DiffContext& ctx) {
    const JetVec v = X.eval(x, ctx);
    return derive(ctx, [&](const Jet& t, const DiffContext& inner) { return f.eval(shifted(x, t, v), inner); });
  });
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  require_same_chart(X.chart(), Y.chart(), "lie_bracket");
  return VectorField(X.chart(), [X, Y](std::span<const Jet> x, const DiffContext& ctx) {
    const JetVec xv = X.eval(x, ctx);
    const JetVec yv = Y.eval(x, ctx);
    JetVec xy = derive(ctx, [&](const Jet& t, const DiffContext& in) { return Y.eval(shifted(x, t, xv), in); });
    const JetVec yx = derive(ctx, [&](const Jet& t, const DiffContext& in) { return X.eval(shifted(x, t, yv), in); });
    for (std::size_t k = 0; k < xy.size(); ++k) xy[k] -= yx[k];
    return xy;
  });
}

TwoForm exterior_derivative(const OneForm& alpha) {
  return TwoForm(alpha.chart(), [alpha](std::span<const Jet> x, const DiffContext& ctx) {
    const auto d = partials(alpha, x, ctx);
    const std::size_t n = d.size();
    JetVec out(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = d[i][j] - d[j][i];
    return out;
  });
}

VectorField gradient_field(const MetricField& g, const OneForm& alpha) {
  require_same_chart(g.chart(), alpha.chart(), "gradient_field");
  return VectorField(g.chart(), [g, alpha](std::span<const Jet> x, const DiffContext& ctx) {
    const RJetMatrix ginv = checked_inverse(metric_matrix(g, x, ctx), x, "gradient_field");
    const JetVec a = alpha.eval(x, ctx);
    const RJetMatrix z = ginv * RJetMatrix::from_entries(static_cast<Eigen::Index>(a.size()), 1, a);
    return z.entries();
  });
}

VectorField covariant_derivative(const Connection& nabla, const VectorField& Z, const VectorField& X) {
  require_same_chart(nabla.chart(), Z.chart(), "covariant_derivative");
  require_same_chart(nabla.chart(), X.chart(), "covariant_derivative");
  return VectorField(nabla.chart(), [nabla, Z, X](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const JetVec z = Z.eval(x, ctx);
    const JetVec xv = X.eval(x, ctx);
    const JetVec gam = nabla.eval(x, ctx);
    JetVec out = derive(ctx, [&](const Jet& t, const DiffContext& in) { return X.eval(shifted(x, t, z), in); });
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[k] += gam[(k * n + i) * n + j] * z[i] * xv[j];
    return out;
  });
}

Covariant2Tensor covariant_derivative_form(const Connection& nabla, const OneForm& alpha) {
  require_same_chart(nabla.chart(), alpha.chart(), "covariant_derivative_form");
  return Covariant2Tensor(nabla.chart(), [nabla, alpha](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const auto d = partials(alpha, x, ctx);
    const JetVec a = alpha.eval(x, ctx);
    const JetVec gam = nabla.eval(x, ctx);
    JetVec out(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Jet s = d[i][j];
        for (std::size_t k = 0; k < n; ++k) s -= gam[(k * n + i) * n + j] * a[k];
        out[i * n + j] = s;
      }
    return out;
  });
}

TorsionField torsion_tensor(const Connection& nabla) {
  return TorsionField(nabla.chart(), [nabla](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const JetVec gam = nabla.eval(x, ctx);
    JetVec out(n * n * n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          out[(k * n + i) * n + j] = gam[(k * n + i) * n + j] - gam[(k * n + j) * n + i];
    return out;
  });
}

LoweredTorsion lower_torsion(const TorsionField& torsion, const MetricField& g) {
  require_same_chart(torsion.chart(), g.chart(), "lower_torsion");
  return LoweredTorsion(g.chart(), [torsion, g](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const JetVec t = torsion.eval(x, ctx);
    const JetVec gv = g.eval(x, ctx);
    JetVec out(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
          Jet s;
          for (std::size_t k = 0; k < n; ++k) s += gv[k * n + l] * t[(k * n + i) * n + j];
          out[(i * n + j) * n + l] = s;
        }
    return out;
  });
}

JetVec raise_christoffels(const JetVec& lowered, const RJetMatrix& ginv, std::size_t n) {
  JetVec out(n * n * n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Jet s;
        for (std::size_t k = 0; k < n; ++k)
          s += ginv(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) * lowered[(i * n + j) * n + k];
        out[(l * n + i) * n + j] = s;
      }
  return out;
}

Connection conjugate_connection(const MetricField& g, const Connection& nabla) {
  require_same_chart(g.chart(), nabla.chart(), "conjugate_connection");
  return Connection(g.chart(), [g, nabla](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const RJetMatrix gm = metric_matrix(g, x, ctx);
    const RJetMatrix ginv = checked_inverse(gm, x, "conjugate_connection");
    const auto dg = partials(g, x, ctx);
    const JetVec gam = nabla.eval(x, ctx);
    JetVec low(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          // d_i g_jk = Gamma_{ik,j} + dual_{ij,k}
          Jet s = dg[i][j * n + k];
          for (std::size_t l = 0; l < n; ++l)
            s -= gm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) * gam[(l * n + i) * n + k];
          low[(i * n + j) * n + k] = s;
        }
    return raise_christoffels(low, ginv, n);
  });
}

Connection levi_civita(const MetricField& g) {
  return Connection(g.chart(), [g](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const RJetMatrix ginv = checked_inverse(metric_matrix(g, x, ctx), x, "levi_civita");
    const auto dg = partials(g, x, ctx);
    JetVec low(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          low[(i * n + j) * n + l] = 0.5 * (dg[i][j * n + l] + dg[j][i * n + l] - dg[l][i * n + j]);
    return raise_christoffels(low, ginv, n);
  });
}

ScalarField metric_pairing(const MetricField& g, const VectorField& X, const VectorField& Y) {
  require_same_chart(g.chart(), X.chart(), "metric_pairing");
  require_same_chart(g.chart(), Y.chart(), "metric_pairing");
  return ScalarField(g.chart(), [g, X, Y](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const JetVec gv = g.eval(x, ctx);
    const JetVec a = X.eval(x, ctx);
    const JetVec b = Y.eval(x, ctx);
    Jet s;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += gv[i * n + j] * a[i] * b[j];
    return JetVec{s};
  });
}

ScalarField conjugacy_defect(const MetricField& g, const Connection& nabla, const Connection& dual,
                             const VectorField& Z, const VectorField& X, const VectorField& Y) {
  const ScalarField zg = directional_derivative(metric_pairing(g, X, Y), Z);
  const ScalarField first = metric_pairing(g, covariant_derivative(nabla, Z, X), Y);
  const ScalarField second = metric_pairing(g, X, covariant_derivative(dual, Z, Y));
  return ScalarField(g.chart(), [zg, first, second](std::span<const Jet> x, const DiffContext& ctx) {
    return JetVec{zg.eval(x, ctx)[0] - first.eval(x, ctx)[0] - second.eval(x, ctx)[0]};
  });
}

VectorField torsion_of_fields(const Connection& nabla, const VectorField& X, const VectorField& Y) {
  const VectorField a = covariant_derivative(nabla, X, Y);
  const VectorField b = covariant_derivative(nabla, Y, X);
  const VectorField c = lie_bracket(X, Y);
  return VectorField(nabla.chart(), [a, b, c](std::span<const Jet> x, const DiffContext& ctx) {
    JetVec out = a.eval(x, ctx);
    const JetVec bv = b.eval(x, ctx);
    const JetVec cv = c.eval(x, ctx);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] -= bv[k] + cv[k];
    return out;
  });
}

VectorField random_vector_field(ChartPtr chart, Rng& rng) {
  const int n = chart->dim();
  struct Term {
    double c0, lin, quad, amp, freq, phase;
    int i, j, k;
  };
  std::vector<Term> terms;
  for (int comp = 0; comp < n; ++comp)
    terms.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5), rng.uniform(-1, 1),
                     rng.uniform(0.5, 2.0), rng.uniform(0, 6.28), rng.uniform_int(0, n - 1),
                     rng.uniform_int(0, n - 1), rng.uniform_int(0, n - 1)});
  return VectorField(std::move(chart), [terms](std::span<const Jet> x, const DiffContext&) {
    JetVec out;
    for (const auto& t : terms) {
      const auto i = static_cast<std::size_t>(t.i), j = static_cast<std::size_t>(t.j),
                 k = static_cast<std::size_t>(t.k);
      out.push_back(t.c0 + t.lin * x[i] + t.quad * x[j] * x[k] + t.amp * sin(t.freq * x[k] + t.phase));
    }
    return out;
  });
}

}  // namespace biform
