#include "biform/biform.hpp"

#include "biform/expression.hpp"

namespace biform {
namespace {

void check_degree(int d, const char* what) {
  if (d < 0 || d > kMaxBlockDegree)
    throw DegreeOverflowError(std::string(what) + ": block degree " + std::to_string(d) +
                              " outside the supported range 0..2");
}

void require_chart(const ChartPtr& a, const ChartPtr& b, const char* op) {
  if (a != b && (a->dim() != b->dim() || a->label() != b->label()))
    throw ChartMismatchError(std::string(op) + ": operands live on different charts");
}

// Contract a flattened tensor with one vector per slot.
Jet contract_all(const JetVec& c, std::span<const JetVec> vecs, std::size_t dim) {
  if (vecs.empty()) return c[0];
  Jet total;
  const std::size_t slots = vecs.size();
  std::vector<std::size_t> idx(slots, 0);
  for (std::size_t flat = 0; flat < c.size(); ++flat) {
    std::size_t r = flat;
    for (std::size_t s = slots; s-- > 0;) {
      idx[s] = r % dim;
      r /= dim;
    }
    Jet term = c[flat];
    for (std::size_t s = 0; s < slots; ++s) term = term * vecs[s][idx[s]];
    total += term;
  }
  return total;
}

BiForm::Neighborhood swapped(const BiForm::Neighborhood& nb) {
  if (!nb) return {};
  return [nb](std::span<const double> m, std::span<const double> n) { return nb(n, m); };
}

BiForm::Neighborhood intersect(const BiForm::Neighborhood& a, const BiForm::Neighborhood& b) {
  if (!a) return b;
  if (!b) return a;
  return [a, b](std::span<const double> m, std::span<const double> n) { return a(m, n) && b(m, n); };
}

JetVec shift_coord(std::span<const Jet> x, std::size_t i, const Jet& t) {
  JetVec y(x.begin(), x.end());
  y[i] += t;
  return y;
}

}  // namespace

// ---------------------------------------------------------------------------
// BiForm

BiForm::BiForm(ChartPtr chart, int p, int q, Fn fn, Neighborhood neighborhood)
    : chart_(std::move(chart)), p_(p), q_(q), fn_(std::move(fn)), neighborhood_(std::move(neighborhood)) {
  if (!chart_) throw Error("BiForm: null chart");
  check_degree(p_, "BiForm");
  check_degree(q_, "BiForm");
}

bool BiForm::in_neighborhood(std::span<const double> m, std::span<const double> n) const {
  return !neighborhood_ || neighborhood_(m, n);
}

JetVec BiForm::coefficients(std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) const {
  JetVec c = fn_(m, n, ctx);
  if (c.size() != size()) throw Error("BiForm: evaluator returned wrong coefficient count");
  return c;
}

Jet BiForm::contract(std::span<const Jet> m, std::span<const Jet> n, std::span<const JetVec> u,
                     std::span<const JetVec> v, const DiffContext& ctx) const {
  if (u.size() != static_cast<std::size_t>(p_) || v.size() != static_cast<std::size_t>(q_))
    throw ArityError("BiForm: expected " + std::to_string(p_) + " left and " + std::to_string(q_) +
                     " right tangent vectors, got " + std::to_string(u.size()) + " and " +
                     std::to_string(v.size()));
  std::vector<JetVec> all(u.begin(), u.end());
  all.insert(all.end(), v.begin(), v.end());
  for (const auto& w : all)
    if (w.size() != static_cast<std::size_t>(dim())) throw ArityError("BiForm: tangent vector has wrong length");
  return contract_all(coefficients(m, n, ctx), all, static_cast<std::size_t>(dim()));
}

double BiForm::evaluate(const Point& m, const Point& n, const std::vector<std::vector<double>>& u,
                        const std::vector<std::vector<double>>& v, const DiffContext& ctx) const {
  chart_->require(m.coords);
  chart_->require(n.coords);
  if (!in_neighborhood(m.coords, n.coords))
    throw DomainError("BiForm: point pair outside the diagonal neighborhood");
  std::vector<JetVec> uj, vj;
  for (const auto& w : u) uj.push_back(constant_jets(w));
  for (const auto& w : v) vj.push_back(constant_jets(w));
  const JetVec mj = constant_jets(m.coords), nj = constant_jets(n.coords);
  return contract(mj, nj, uj, vj, ctx).value();
}

BiForm operator+(const BiForm& a, const BiForm& b) {
  require_chart(a.chart(), b.chart(), "BiForm +");
  if (a.p_ != b.p_ || a.q_ != b.q_) throw ArityError("BiForm +: degrees differ");
  return BiForm(a.chart(), a.p_, a.q_,
                [a, b](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
                  JetVec x = a.coefficients(m, n, ctx);
                  const JetVec y = b.coefficients(m, n, ctx);
                  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
                  return x;
                },
                intersect(a.neighborhood_, b.neighborhood_));
}

BiForm operator-(const BiForm& a, const BiForm& b) { return a + (-1.0) * b; }

BiForm operator*(double s, const BiForm& a) {
  return BiForm(a.chart(), a.p_, a.q_,
                [s, a](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
                  JetVec x = a.coefficients(m, n, ctx);
                  for (auto& v : x) v *= s;
                  return x;
                },
                a.neighborhood_);
}

// ---------------------------------------------------------------------------
// Constructors

TwoPointScalar two_point_scalar(ChartPtr chart, TwoPointFunction f) {
  return BiForm(std::move(chart), 0, 0,
                [f = std::move(f)](std::span<const Jet> m, std::span<const Jet> n, const DiffContext&) {
                  return JetVec{f(m, n)};
                });
}

TwoPointScalar parse_two_point_scalar(ChartPtr chart, const std::string& expression) {
  std::vector<std::string> vars;
  for (int i = 0; i < chart->dim(); ++i) vars.push_back("m" + std::to_string(i));
  for (int i = 0; i < chart->dim(); ++i) vars.push_back("n" + std::to_string(i));
  const auto e = std::make_shared<Expression>(Expression::parse(expression, vars));
  return two_point_scalar(std::move(chart), [e](std::span<const Jet> m, std::span<const Jet> n) {
    JetVec z(m.begin(), m.end());
    z.insert(z.end(), n.begin(), n.end());
    return e->eval(z);
  });
}

TwoPointScalar left_lift(const ScalarField& f) {
  return BiForm(f.chart(), 0, 0, [f](std::span<const Jet> m, std::span<const Jet>, const DiffContext& ctx) {
    return f.eval(m, ctx);
  });
}

TwoPointScalar right_lift(const ScalarField& f) {
  return BiForm(f.chart(), 0, 0, [f](std::span<const Jet>, std::span<const Jet> n, const DiffContext& ctx) {
    return f.eval(n, ctx);
  });
}

BiForm left_pullback(const OneForm& alpha) {
  return BiForm(alpha.chart(), 1, 0, [alpha](std::span<const Jet> m, std::span<const Jet>, const DiffContext& ctx) {
    return alpha.eval(m, ctx);
  });
}

BiForm right_pullback(const OneForm& beta) {
  return BiForm(beta.chart(), 0, 1, [beta](std::span<const Jet>, std::span<const Jet> n, const DiffContext& ctx) {
    return beta.eval(n, ctx);
  });
}

BiForm tensor_sum(const std::vector<OneForm>& left, const std::vector<OneForm>& right) {
  if (left.empty() || left.size() != right.size()) throw ArityError("tensor_sum: need matching nonempty lists");
  const ChartPtr chart = left.front().chart();
  for (const auto& a : left) require_chart(chart, a.chart(), "tensor_sum");
  for (const auto& b : right) require_chart(chart, b.chart(), "tensor_sum");
  return BiForm(chart, 1, 1,
                [left, right](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
                  const std::size_t d = m.size();
                  JetVec out(d * d);
                  for (std::size_t j = 0; j < left.size(); ++j) {
                    const JetVec a = left[j].eval(m, ctx);
                    const JetVec b = right[j].eval(n, ctx);
                    for (std::size_t r = 0; r < d; ++r)
                      for (std::size_t c = 0; c < d; ++c) out[r * d + c] += a[r] * b[c];
                  }
                  return out;
                });
}

BiForm scale(const TwoPointScalar& f, const BiForm& w) {
  if (f.left_degree() != 0 || f.right_degree() != 0) throw ArityError("scale: factor must be a (0,0) bi-form");
  require_chart(f.chart(), w.chart(), "scale");
  return BiForm(w.chart(), w.left_degree(), w.right_degree(),
                [f, w](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
                  const Jet s = f.coefficients(m, n, ctx)[0];
                  JetVec c = w.coefficients(m, n, ctx);
                  for (auto& v : c) v = v * s;
                  return c;
                },
                intersect(f.neighborhood(), w.neighborhood()));
}

BiForm with_neighborhood(const BiForm& w, BiForm::Neighborhood neighborhood) {
  return BiForm(w.chart(), w.left_degree(), w.right_degree(),
                [w](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
                  return w.coefficients(m, n, ctx);
                },
                intersect(w.neighborhood(), std::move(neighborhood)));
}

// ---------------------------------------------------------------------------
// BlockAlternatingTensor

BlockAlternatingTensor::BlockAlternatingTensor(ChartPtr chart, int p, int q, Fn fn)
    : chart_(std::move(chart)), p_(p), q_(q), fn_(std::move(fn)) {}

JetVec BlockAlternatingTensor::eval(std::span<const Jet> x, const DiffContext& ctx) const { return fn_(x, ctx); }

std::vector<double> BlockAlternatingTensor::components(const Point& x, const DiffContext& ctx) const {
  chart_->require(x.coords);
  const JetVec xj = constant_jets(x.coords);
  return values(eval(xj, ctx));
}

double BlockAlternatingTensor::evaluate(const Point& x, const std::vector<std::vector<double>>& tangents,
                                        const DiffContext& ctx) const {
  if (tangents.size() != static_cast<std::size_t>(p_ + q_))
    throw ArityError("BlockAlternatingTensor: expected " + std::to_string(p_ + q_) + " tangent vectors");
  chart_->require(x.coords);
  const JetVec xj = constant_jets(x.coords);
  std::vector<JetVec> t;
  for (const auto& v : tangents) t.push_back(constant_jets(v));
  return contract_all(eval(xj, ctx), t, static_cast<std::size_t>(dim())).value();
}

// ---------------------------------------------------------------------------
// Operators

TwoPointScalar pair(const BiForm& w, const std::vector<VectorField>& X, const std::vector<VectorField>& Y) {
  if (X.size() != static_cast<std::size_t>(w.left_degree()) || Y.size() != static_cast<std::size_t>(w.right_degree()))
    throw ArityError("pair: bi-form of degree (" + std::to_string(w.left_degree()) + "," +
                     std::to_string(w.right_degree()) + ") paired with " + std::to_string(X.size()) + " and " +
                     std::to_string(Y.size()) + " vector fields");
  for (const auto& f : X) require_chart(w.chart(), f.chart(), "pair");
  for (const auto& f : Y) require_chart(w.chart(), f.chart(), "pair");
  return BiForm(
      w.chart(), 0, 0,
      [w, X, Y](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
        std::vector<JetVec> u, v;
        for (const auto& f : X) u.push_back(f.eval(m, ctx));
        for (const auto& f : Y) v.push_back(f.eval(n, ctx));
        return JetVec{w.contract(m, n, u, v, ctx)};
      },
      w.neighborhood());
}

BlockAlternatingTensor diagonal_pullback(const BiForm& w) {
  return BlockAlternatingTensor(w.chart(), w.left_degree(), w.right_degree(),
                                [w](std::span<const Jet> x, const DiffContext& ctx) {
                                  if (w.neighborhood()) {
                                    const auto xv = values(x);
                                    if (!w.neighborhood()(xv, xv))
                                      throw DomainError("diagonal_pullback: " + format_coords(xv) +
                                                        " is outside the diagonal neighborhood");
                                  }
                                  return w.coefficients(x, x, ctx);
                                });
}

BiForm swap_pullback(const BiForm& w) {
  const int p = w.left_degree(), q = w.right_degree();
  return BiForm(
      w.chart(), q, p,
      [w, p, q](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
        const JetVec c = w.coefficients(n, m, ctx);
        const std::size_t d = m.size();
        const std::size_t left = ipow(static_cast<int>(d), p), right = ipow(static_cast<int>(d), q);
        JetVec out(c.size());
        // c[L][R] -> out[R][L]
        for (std::size_t l = 0; l < left; ++l)
          for (std::size_t r = 0; r < right; ++r) out[r * left + l] = c[l * right + r];
        return out;
      },
      swapped(w.neighborhood()));
}

BiForm left_differential(const BiForm& w) {
  const int p = w.left_degree(), q = w.right_degree();
  if (p + 1 > kMaxBlockDegree)
    throw DegreeOverflowError("left_differential: left degree " + std::to_string(p) + " + 1 exceeds 2");
  return BiForm(
      w.chart(), p + 1, q,
      [w, p, q](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
        const std::size_t d = m.size();
        std::vector<JetVec> dw;
        dw.reserve(d);
        for (std::size_t a = 0; a < d; ++a)
          dw.push_back(derive(ctx, [&](const Jet& t, const DiffContext& inner) {
            return w.coefficients(shift_coord(m, a, t), n, inner);
          }));
        const std::size_t rest = ipow(static_cast<int>(d), q);
        if (p == 0) {
          JetVec out(d * rest);
          for (std::size_t a = 0; a < d; ++a)
            for (std::size_t r = 0; r < rest; ++r) out[a * rest + r] = dw[a][r];
          return out;
        }
        // p == 1: (dw)[a][b][r] = d_a w[b][r] - d_b w[a][r]
        JetVec out(d * d * rest);
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b)
            for (std::size_t r = 0; r < rest; ++r)
              out[(a * d + b) * rest + r] = dw[a][b * rest + r] - dw[b][a * rest + r];
        return out;
      },
      w.neighborhood());
}

BiForm right_differential(const BiForm& w) {
  if (w.right_degree() + 1 > kMaxBlockDegree)
    throw DegreeOverflowError("right_differential: right degree " + std::to_string(w.right_degree()) +
                              " + 1 exceeds 2");
  return swap_pullback(left_differential(swap_pullback(w)));
}

TwoPointScalar left_lie_derivative(const TwoPointScalar& f, const VectorField& X) {
  require_chart(f.chart(), X.chart(), "left_lie_derivative");
  return BiForm(
      f.chart(), 0, 0,
      [f, X](std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) {
        const JetVec v = X.eval(m, ctx);
        return derive(ctx, [&](const Jet& t, const DiffContext& inner) {
          JetVec y(m.begin(), m.end());
          for (std::size_t k = 0; k < y.size(); ++k) y[k] += t * v[k];
          return f.coefficients(y, n, inner);
        });
      },
      f.neighborhood());
}

TwoPointScalar right_lie_derivative(const TwoPointScalar& f, const VectorField& X) {
  return swap_pullback(left_lie_derivative(swap_pullback(f), X));
}

TwoPointScalar left_differential_paired(const BiForm& w, const std::vector<VectorField>& X,
                                        const std::vector<VectorField>& Y) {
  const int p = w.left_degree();
  if (p > 1)
    throw DegreeOverflowError("left_differential_paired: supports left degree 0 or 1");
  if (X.size() != static_cast<std::size_t>(p + 1)) throw ArityError("left_differential_paired: need p+1 left fields");
  if (p == 0) return left_lie_derivative(pair(w, {}, Y), X[0]);
  const TwoPointScalar a = left_lie_derivative(pair(w, {X[1]}, Y), X[0]);
  const TwoPointScalar b = left_lie_derivative(pair(w, {X[0]}, Y), X[1]);
  const TwoPointScalar c = pair(w, {lie_bracket(X[0], X[1])}, Y);
  return a - b - c;
}

BiForm random_biform(ChartPtr chart, int p, int q, Rng& rng) {
  check_degree(p, "random_biform");
  check_degree(q, "random_biform");
  const int d = chart->dim();
  const int vars = 2 * d;
  struct Coef {
    double c0, c1, c2, c3, amp, freq, phase, ex;
    int i, j, k, l, s;
  };
  const std::size_t count = ipow(d, p + q);
  std::vector<Coef> coefs;
  for (std::size_t c = 0; c < count; ++c)
    coefs.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5),
                     rng.uniform(-1, 1), rng.uniform(0.3, 1.5), rng.uniform(0, 6.28), rng.uniform(-0.4, 0.4),
                     rng.uniform_int(0, vars - 1), rng.uniform_int(0, vars - 1), rng.uniform_int(0, vars - 1),
                     rng.uniform_int(0, vars - 1), rng.uniform_int(0, vars - 1)});
  auto raw = [coefs](std::span<const Jet> z, std::size_t c) {
    const Coef& k = coefs[c];
    const auto i = static_cast<std::size_t>(k.i), j = static_cast<std::size_t>(k.j),
               l = static_cast<std::size_t>(k.l), kk = static_cast<std::size_t>(k.k),
               s = static_cast<std::size_t>(k.s);
    return k.c0 + k.c1 * z[i] + k.c2 * z[i] * z[j] + k.c3 * z[i] * z[j] * z[kk] +
           k.amp * sin(k.freq * z[l] + k.phase) + 0.3 * exp(k.ex * z[s]) * cos(z[j]);
  };
  return BiForm(std::move(chart), p, q,
                [raw, p, q, d](std::span<const Jet> m, std::span<const Jet> n, const DiffContext&) {
                  JetVec z(m.begin(), m.end());
                  z.insert(z.end(), n.begin(), n.end());
                  const std::size_t dd = static_cast<std::size_t>(d);
                  const std::size_t lsz = ipow(d, p), rsz = ipow(d, q);
                  JetVec h(lsz * rsz);
                  for (std::size_t c = 0; c < h.size(); ++c) h[c] = raw(z, c);
                  // antisymmetrize degree-2 blocks
                  JetVec out = h;
                  if (p == 2)
                    for (std::size_t a = 0; a < dd; ++a)
                      for (std::size_t b = 0; b < dd; ++b)
                        for (std::size_t r = 0; r < rsz; ++r)
                          out[(a * dd + b) * rsz + r] = h[(a * dd + b) * rsz + r] - h[(b * dd + a) * rsz + r];
                  if (q == 2) {
                    const JetVec tmp = out;
                    for (std::size_t l = 0; l < lsz; ++l)
                      for (std::size_t a = 0; a < dd; ++a)
                        for (std::size_t b = 0; b < dd; ++b)
                          out[l * rsz + a * dd + b] = tmp[l * rsz + a * dd + b] - tmp[l * rsz + b * dd + a];
                  }
                  return out;
                });
}

}  // namespace biform
