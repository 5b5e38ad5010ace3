#include "biform/teleparallel.hpp"

#include <cmath>

namespace biform {
namespace {

RJetMatrix frame_inverse(const RJetMatrix& a, std::span<const Jet> x) {
  try {
    return a.inverse();
  } catch (const LinearSolveError& e) {
    throw FrameError(std::string("coframe degenerates at ") + format_coords(values(x)) + ": " + e.what());
  }
}

RJetMatrix frame_at(const Coframe& B, std::span<const Jet> x, const DiffContext& ctx) {
  const auto n = static_cast<Eigen::Index>(B.dim());
  JetVec e;
  e.reserve(static_cast<std::size_t>(n * n));
  for (const auto& a : B.alphas()) {
    const JetVec c = a.eval(x, ctx);
    e.insert(e.end(), c.begin(), c.end());
  }
  return RJetMatrix::from_entries(n, n, e);
}

// Z as a matrix [j][k] = Z_j^k.
RJetMatrix gradient_matrix(const MetricField& g, const Coframe& B, std::span<const Jet> x, const DiffContext& ctx) {
  const RJetMatrix ginv = checked_inverse(metric_matrix(g, x, ctx), x, "gradient_frame");
  // Z_j^k = g^{kl} alpha^j_l, i.e. Z = A g^{-1} (g symmetric)
  return frame_at(B, x, ctx) * ginv;
}

// [i][k] = beta^i_k. beta^i_k Z_j^k = delta, so beta = (Z^T)^{-1}.
RJetMatrix dual_coframe_matrix(const MetricField& g, const Coframe& B, std::span<const Jet> x, const DiffContext& ctx) {
  return frame_inverse(gradient_matrix(g, B, x, ctx).transpose(), x);
}

}  // namespace

Coframe::Coframe(ChartPtr chart, std::vector<OneForm> alphas) : chart_(std::move(chart)), alphas_(std::move(alphas)) {
  if (static_cast<int>(alphas_.size()) != chart_->dim())
    throw FrameError("coframe needs " + std::to_string(chart_->dim()) + " one-forms, got " +
                     std::to_string(alphas_.size()));
  for (const auto& a : alphas_)
    if (a.chart() != chart_ && (a.chart()->dim() != chart_->dim() || a.chart()->label() != chart_->label()))
      throw ChartMismatchError("coframe: one-form on a different chart");
}

FrameMatrixField Coframe::matrix() const {
  const Coframe self = *this;
  return FrameMatrixField(chart_, [self](std::span<const Jet> x, const DiffContext& ctx) {
    return frame_at(self, x, ctx).entries();
  });
}

void Coframe::require_frame(const std::vector<Point>& probes, const DiffContext& ctx) const {
  for (const auto& p : probes) {
    const JetVec x = constant_jets(p.coords);
    frame_inverse(frame_at(*this, x, ctx), x);
  }
}

Connection teleparallel_connection(const Coframe& B) {
  return Connection(B.chart(), [B](std::span<const Jet> x, const DiffContext& ctx) {
    const std::size_t n = x.size();
    const RJetMatrix e = frame_inverse(frame_at(B, x, ctx), x);  // e(k, a) = e_a^k
    std::vector<std::vector<JetVec>> d;                          // d[a][i][j] = d_i alpha^a_j
    for (const auto& a : B.alphas()) d.push_back(partials(a, x, ctx));
    JetVec out(n * n * n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < n; ++a) {
        const Jet eka = e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a));
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) out[(k * n + i) * n + j] += eka * d[a][i][j];
      }
    return out;
  });
}

GradientFrame gradient_frame(const MetricField& g, const Coframe& B) {
  GradientFrame f;
  const auto n = static_cast<std::size_t>(B.dim());
  for (std::size_t j = 0; j < n; ++j) f.Z.push_back(gradient_field(g, B[j]));
  for (std::size_t i = 0; i < n; ++i)
    f.beta.push_back(OneForm(B.chart(), [g, B, i](std::span<const Jet> x, const DiffContext& ctx) {
      const RJetMatrix b = dual_coframe_matrix(g, B, x, ctx);
      JetVec row;
      for (Eigen::Index k = 0; k < b.cols(); ++k) row.push_back(b(static_cast<Eigen::Index>(i), k));
      return row;
    }));
  return f;
}

TwoPointScalar frame_coefficient(const BiForm& w, const GradientFrame& frame, std::size_t i, std::size_t j) {
  return pair(w, {frame.Z.at(i)}, {frame.Z.at(j)});
}

BiForm biform_from_frame_coefficients(const GradientFrame& frame, const std::vector<TwoPointScalar>& w) {
  const std::size_t n = frame.beta.size();
  if (w.size() != n * n) throw ArityError("biform_from_frame_coefficients: need dim^2 coefficients");
  BiForm sum = scale(w[0], tensor_sum({frame.beta[0]}, {frame.beta[0]}));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i || j) sum = sum + scale(w[i * n + j], tensor_sum({frame.beta[i]}, {frame.beta[j]}));
  return sum;
}

std::vector<TwoPointScalar> canonical_coefficients(const MetricField& g, const GradientFrame& frame) {
  std::vector<TwoPointScalar> out;
  for (const auto& zi : frame.Z)
    for (const auto& zj : frame.Z) out.push_back(left_lift(metric_pairing(g, zi, zj)));
  return out;
}

ContrastBiForm canonical_biform(const MetricField& g, const Coframe& B, const ProbeOptions& probes) {
  // sum_j alpha^j(m) beta^j(n), with the whole dual coframe solved once per n
  const BiForm form(B.chart(), 1, 1, [g, B](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
    const RJetMatrix a = frame_at(B, m, ctx);
    const RJetMatrix b = dual_coframe_matrix(g, B, n, ctx);
    return (a.transpose() * b).entries();
  });
  ContrastBiForm w(form, probes);
  const auto pull = diagonal_pullback(w.form());
  for (const auto& p : w.probes()) {
    const auto a = pull.components(p, w.context());
    const auto b = g.at(p, w.context());
    for (std::size_t k = 0; k < a.size(); ++k)
      if (!(std::abs(a[k] - b[k]) <= 1e-9 * std::max(1.0, std::abs(b[k]))))
        throw ContrastError("canonical bi-form: diagonal pullback differs from g at " + format_coords(p.coords));
  }
  return w;
}

InverseProblemReport verify_inverse_problem(const ContrastBiForm& w, const MetricField& g, const Connection& nabla,
                                            const Coframe& B, double tol) {
  const ChartPtr& chart = w.chart();
  const auto n = static_cast<std::size_t>(chart->dim());
  const GradientFrame frame = gradient_frame(g, B);
  const DiffContext& ctx = w.context();
  const Execution exec = w.options().exec;

  struct Entry {
    BlockAlternatingTensor pull, dpull;  // iota^* w_ij, iota^* d^L w_ij
    ScalarField gij;
    std::vector<ScalarField> rhs;  // g(nabla_a Z_i, Z_j)
    std::vector<ScalarField> dg;   // d_a g_ij
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const TwoPointScalar wij = frame_coefficient(w.form(), frame, i, j);
      const ScalarField gij = metric_pairing(g, frame.Z[i], frame.Z[j]);
      Entry e{diagonal_pullback(wij), diagonal_pullback(left_differential(wij)), gij, {}, {}};
      for (std::size_t a = 0; a < n; ++a) {
        const VectorField da = coordinate_vector(chart, static_cast<int>(a));
        e.rhs.push_back(metric_pairing(g, covariant_derivative(nabla, da, frame.Z[i]), frame.Z[j]));
        e.dg.push_back(directional_derivative(gij, da));
      }
      entries.push_back(std::move(e));
    }

  InverseProblemReport r{};
  r.tol = tol;
  r.connection = sweep(
      w.probes(),
      [&](const Point& p) {
        double m = 0;
        for (const auto& e : entries) {
          const auto lhs = e.dpull.components(p, ctx);
          for (std::size_t a = 0; a < n; ++a) m = std::max(m, std::abs(lhs[a] - e.rhs[a].at(p, ctx)[0]));
        }
        return m;
      },
      exec);
  r.metric = sweep(
      w.probes(),
      [&](const Point& p) {
        double m = 0;
        for (const auto& e : entries) m = std::max(m, std::abs(e.pull.components(p, ctx)[0] - e.gij.at(p, ctx)[0]));
        return m;
      },
      exec);
  r.exterior = sweep(
      w.probes(),
      [&](const Point& p) {
        double m = 0;
        for (const auto& e : entries) {
          const auto lhs = e.dpull.components(p, ctx);
          for (std::size_t a = 0; a < n; ++a) m = std::max(m, std::abs(lhs[a] - e.dg[a].at(p, ctx)[0]));
        }
        return m;
      },
      exec);
  r.pass = r.connection.max < tol && r.metric.max < tol && r.exterior.max < tol;
  return r;
}

SweepStats covariant_constancy_residual(const Connection& nabla, const Coframe& B, const std::vector<Point>& probes,
                                        const DiffContext& ctx, Execution exec) {
  std::vector<Covariant2Tensor> d;
  for (const auto& a : B.alphas()) d.push_back(covariant_derivative_form(nabla, a));
  return sweep(
      probes,
      [&](const Point& p) {
        double m = 0;
        for (const auto& t : d) m = std::max(m, max_abs(t.at(p, ctx)));
        return m;
      },
      exec);
}

SweepStats closedness_residual(const Coframe& B, const std::vector<Point>& probes, const DiffContext& ctx,
                               Execution exec) {
  std::vector<TwoForm> d;
  for (const auto& a : B.alphas()) d.push_back(exterior_derivative(a));
  return sweep(
      probes,
      [&](const Point& p) {
        double m = 0;
        for (const auto& t : d) m = std::max(m, max_abs(t.at(p, ctx)));
        return m;
      },
      exec);
}

SweepStats frame_relation_residual(const MetricField& g, const Coframe& B, const std::vector<Point>& probes,
                                   const DiffContext& ctx) {
  const GradientFrame f = gradient_frame(g, B);
  const std::size_t n = f.Z.size();
  return sweep(probes, [&](const Point& p) {
    std::vector<std::vector<double>> z, beta;
    for (std::size_t i = 0; i < n; ++i) {
      z.push_back(f.Z[i].at(p, ctx));
      beta.push_back(f.beta[i].at(p, ctx));
    }
    const auto gv = g.at(p, ctx);
    double m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto a = B[j].at(p, ctx);
      for (std::size_t k = 0; k < n; ++k) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
          double gij = 0;
          for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) gij += gv[u * n + v] * z[i][u] * z[j][v];
          s += gij * beta[i][k];
        }
        m = std::max(m, std::abs(a[k] - s));
      }
    }
    return m;
  });
}

SweepStats frame_duality_residual(const GradientFrame& frame, const std::vector<Point>& probes,
                                  const DiffContext& ctx) {
  const std::size_t n = frame.Z.size();
  return sweep(probes, [&](const Point& p) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto b = frame.beta[i].at(p, ctx);
      for (std::size_t j = 0; j < n; ++j) {
        const auto z = frame.Z[j].at(p, ctx);
        double s = 0;
        for (std::size_t k = 0; k < n; ++k) s += b[k] * z[k];
        m = std::max(m, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    }
    return m;
  });
}

// ---------------------------------------------------------------------------
// Corpus

Coframe cartesian_coframe(const ChartPtr& plane) {
  return Coframe(plane, {constant_one_form(plane, {1, 0}), constant_one_form(plane, {0, 1})});
}

Coframe exponential_coframe(const ChartPtr& plane) {
  return Coframe(plane, {constant_one_form(plane, {1, 0}),
                         one_form(plane, {constant_scalar(plane, 0), parse_scalar_field(plane, "exp(x)")})});
}

ChartPtr annulus_chart() {
  return std::make_shared<const ChartManifold>(
      2, [](std::span<const double> x) { return x[0] > 0.5 && x[0] < 2.0; },
      ChartManifold::Box{{0.5, -3.0}, {2.0, 3.0}}, "annulus(r,theta)");
}

Coframe polar_cartesian_coframe(const ChartPtr& annulus) {
  return Coframe(annulus, {one_form(annulus, {parse_scalar_field(annulus, "cos(y)"),
                                              parse_scalar_field(annulus, "-x*sin(y)")}),
                           one_form(annulus, {parse_scalar_field(annulus, "sin(y)"),
                                              parse_scalar_field(annulus, "x*cos(y)")})});
}

Coframe polar_orthonormal_coframe(const ChartPtr& annulus) {
  return Coframe(annulus, {constant_one_form(annulus, {1, 0}),
                           one_form(annulus, {constant_scalar(annulus, 0), parse_scalar_field(annulus, "x")})});
}

MetricField polar_metric(const ChartPtr& annulus) {
  return metric_field(annulus, {constant_scalar(annulus, 1), constant_scalar(annulus, 0),
                                constant_scalar(annulus, 0), parse_scalar_field(annulus, "x^2")});
}

Coframe random_coframe(const ChartPtr& chart, Rng& rng) {
  const int n = chart->dim();
  std::vector<OneForm> alphas;
  for (int j = 0; j < n; ++j) {
    const VectorField v = random_vector_field(chart, rng);
    alphas.push_back(OneForm(chart, [v, j](std::span<const Jet> x, const DiffContext& ctx) {
      JetVec c = v.eval(x, ctx);
      for (auto& e : c) e *= 0.2;
      c[static_cast<std::size_t>(j)] += 1.0;
      return c;
    }));
  }
  return Coframe(chart, std::move(alphas));
}

}  // namespace biform
