#include "biform/corpus.hpp"

namespace biform {

ChartPtr gaussian_chart() {
  return std::make_shared<const ChartManifold>(
      2, [](std::span<const double> x) { return x[1] > 0; }, ChartManifold::Box{{-2.0, 0.5}, {2.0, 3.0}},
      "gaussian(mu,sigma)");
}

TwoPointScalar gaussian_kl(const ChartPtr& chart) {
  return two_point_scalar(chart, [](std::span<const Jet> m, std::span<const Jet> n) {
    const Jet& s1 = m[1];
    const Jet& s2 = n[1];
    const Jet dm = m[0] - n[0];
    return log(s2 / s1) + (s1 * s1 + dm * dm) / (2.0 * s2 * s2) - 0.5;
  });
}

TwoPointScalar squared_euclidean(const ChartPtr& chart) {
  return two_point_scalar(chart, [](std::span<const Jet> m, std::span<const Jet> n) {
    Jet s;
    for (std::size_t i = 0; i < m.size(); ++i) s += 0.5 * (m[i] - n[i]) * (m[i] - n[i]);
    return s;
  });
}

TwoPointScalar random_bregman(const ChartPtr& chart, Rng& rng) {
  const auto n = static_cast<std::size_t>(chart->dim());
  struct Mode {
    double c;
    std::vector<double> a;
  };
  std::vector<Mode> modes;
  for (int k = 0; k < 3; ++k) {
    Mode md{rng.uniform(0.05, 0.3), {}};
    for (std::size_t i = 0; i < n; ++i) md.a.push_back(rng.uniform(-1, 1));
    modes.push_back(std::move(md));
  }
  return two_point_scalar(chart, [modes](std::span<const Jet> m, std::span<const Jet> y) {
    // phi(m) - phi(y) - grad phi(y) . (m - y)
    Jet r;
    for (std::size_t i = 0; i < m.size(); ++i) r += 0.5 * (m[i] - y[i]) * (m[i] - y[i]);
    for (const auto& md : modes) {
      Jet am, ay, ad;
      for (std::size_t i = 0; i < m.size(); ++i) {
        am += md.a[i] * m[i];
        ay += md.a[i] * y[i];
      }
      const Jet ey = exp(ay);
      r += md.c * (exp(am) - ey - ey * (am - ay));
    }
    return r;
  });
}

namespace {

struct RandomTerm {
  double c, a, b, ph;
  std::size_t i, j, k;
};

std::vector<RandomTerm> random_terms(std::size_t vars, Rng& rng, int count) {
  std::vector<RandomTerm> t;
  auto idx = [&] { return static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(vars) - 1)); };
  for (int k = 0; k < count; ++k)
    t.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.3, 1.5), rng.uniform(0, 6.28), idx(), idx(),
                 idx()});
  return t;
}

Jet eval_terms(const std::vector<RandomTerm>& terms, std::span<const Jet> z) {
  Jet r;
  for (const auto& t : terms)
    r += t.c * z[t.i] * z[t.j] + t.a * sin(t.b * z[t.k] + t.ph) * z[t.i] + 0.2 * t.c * z[t.i] * z[t.j] * z[t.k];
  return r;
}

JetVec concat(std::span<const Jet> a, std::span<const Jet> b) {
  JetVec z(a.begin(), a.end());
  z.insert(z.end(), b.begin(), b.end());
  return z;
}

}  // namespace

TwoPointScalar random_symmetric_two_point(const ChartPtr& chart, Rng& rng, double eps) {
  const auto terms = random_terms(2 * static_cast<std::size_t>(chart->dim()), rng, 5);
  return two_point_scalar(chart, [terms, eps](std::span<const Jet> m, std::span<const Jet> n) {
    Jet r;
    for (std::size_t i = 0; i < m.size(); ++i) r += 0.5 * (m[i] - n[i]) * (m[i] - n[i]);
    return r + eps * (eval_terms(terms, concat(m, n)) + eval_terms(terms, concat(n, m)));
  });
}

BiForm random_precontrast(const ChartPtr& chart, Rng& rng) {
  const std::size_t d = static_cast<std::size_t>(chart->dim());
  const BiForm exact = -1.0 * right_differential(random_symmetric_two_point(chart, rng));
  std::vector<std::vector<RandomTerm>> r;
  for (std::size_t k = 0; k < d * d * d; ++k) r.push_back(random_terms(2 * d, rng, 2));
  const BiForm flat(chart, 0, 1, [r, d](std::span<const Jet> m, std::span<const Jet> n, const DiffContext&) {
    const JetVec z = concat(m, n);
    JetVec out(d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t k = 0; k < d; ++k)
          out[k] += 0.3 * (m[a] - n[a]) * (m[b] - n[b]) * eval_terms(r[(a * d + b) * d + k], z);
    return out;
  });
  return exact + flat;
}

}  // namespace biform
