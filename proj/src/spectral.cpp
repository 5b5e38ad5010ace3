#include "biform/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace biform {
namespace {

// Points whose spread is below this fraction of their mean are summed from the
// Taylor expansion; extra terms beyond the divided-difference order.
constexpr double kClusterRatio = 0.1;
constexpr std::size_t kExtraTerms = 22;

using Cplx = std::complex<double>;
using CDense = CJetMatrix::Dense;

double dd_recursive(const SpectralFunction& f, std::span<const double> x,
                    std::map<double, std::vector<double>>& cache);

double dd_clustered(const SpectralFunction& f, std::span<const double> x,
                    std::map<double, std::vector<double>>& cache) {
  const std::size_t n = x.size() - 1;
  double c = 0;
  for (double v : x) c += v;
  c /= static_cast<double>(x.size());
  auto it = cache.find(c);
  if (it == cache.end() || it->second.size() < n + kExtraTerms + 1)
    it = cache.insert_or_assign(c, f.taylor(c, n + kExtraTerms)).first;
  const auto& a = it->second;
  // h[m]: complete homogeneous symmetric polynomials of the offsets.
  std::vector<double> h(kExtraTerms + 1, 0.0);
  h[0] = 1.0;
  for (double v : x) {
    const double d = v - c;
    for (std::size_t m = 1; m <= kExtraTerms; ++m) h[m] += d * h[m - 1];
  }
  double s = 0;
  for (std::size_t m = kExtraTerms + 1; m-- > 0;) s += a[n + m] * h[m];
  return s;
}

double dd_recursive(const SpectralFunction& f, std::span<const double> x,
                    std::map<double, std::vector<double>>& cache) {
  const std::size_t n = x.size() - 1;
  if (n == 0) return f(x[0]);
  const double spread = x[n] - x[0];
  double c = 0;
  for (double v : x) c += v;
  c /= static_cast<double>(x.size());
  if (spread <= kClusterRatio * std::abs(c)) return dd_clustered(f, x, cache);
  return (dd_recursive(f, x.subspan(1), cache) - dd_recursive(f, x.first(n), cache)) / spread;
}

double divided_difference_cached(const SpectralFunction& f, std::span<const double> points,
                                 std::map<double, std::vector<double>>& cache) {
  std::array<double, 4> x{};
  if (points.empty() || points.size() > x.size())
    throw Error("divided_difference: supports 1 to 4 points");
  std::copy(points.begin(), points.end(), x.begin());
  std::sort(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(points.size()));
  return dd_recursive(f, std::span<const double>(x.data(), points.size()), cache);
}

// Ordered partitions of `mask` into nonempty disjoint blocks.
void ordered_partitions(unsigned mask, std::vector<unsigned>& prefix,
                        std::vector<std::vector<unsigned>>& out) {
  if (mask == 0) {
    out.push_back(prefix);
    return;
  }
  for (unsigned t = mask; t != 0; t = (t - 1) & mask) {
    prefix.push_back(t);
    ordered_partitions(mask & ~t, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

double SpectralFunction::operator()(double x) const { return fn_(TaylorSeries(0, x))[0]; }

std::vector<double> SpectralFunction::taylor(double x, std::size_t order) const {
  return fn_(TaylorSeries::variable(order, x)).coefficients();
}

SpectralFunction spectral_log() {
  return {"log", [](const TaylorSeries& x) { return log(x); }};
}

SpectralFunction spectral_xlogx() {
  return {"xlogx", [](const TaylorSeries& x) { return x * log(x); }};
}

double divided_difference(const SpectralFunction& f, std::span<const double> points) {
  std::map<double, std::vector<double>> cache;
  return divided_difference_cached(f, points, cache);
}

CJetMatrix hermitian_function(const CJetMatrix& m, const SpectralFunction& f) {
  const Eigen::Index d = m.rows();
  const CDense a0 = 0.5 * (m.value() + m.value().adjoint());
  Eigen::SelfAdjointEigenSolver<CDense> es(a0);
  if (es.info() != Eigen::Success) throw Error("hermitian_function: eigendecomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const CDense& u = es.eigenvectors();

  std::map<double, std::vector<double>> cache;
  CDense r0 = CDense::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) r0(i, i) = f(lam(i));

  const unsigned sup = m.support();
  CJetMatrix out(u * r0 * u.adjoint());
  if (sup == 0) return out;

  std::array<CDense, kJetSize> nt;
  for (unsigned s = 1; s < kJetSize; ++s)
    if (m.has(s)) nt[s] = u.adjoint() * m.part(s) * u;

  const int max_len = std::popcount(sup);
  std::vector<double> dd1, dd2, dd3;
  auto at2 = [d](Eigen::Index a, Eigen::Index b) { return a * d + b; };
  auto at3 = [d](Eigen::Index a, Eigen::Index c, Eigen::Index b) { return (a * d + c) * d + b; };
  auto at4 = [d](Eigen::Index a, Eigen::Index c, Eigen::Index e, Eigen::Index b) {
    return ((a * d + c) * d + e) * d + b;
  };
  dd1.resize(static_cast<std::size_t>(d * d));
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      const double p[] = {lam(a), lam(b)};
      dd1[at2(a, b)] = divided_difference_cached(f, p, cache);
    }
  if (max_len >= 2) {
    dd2.resize(static_cast<std::size_t>(d * d * d));
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index b = 0; b < d; ++b) {
          const double p[] = {lam(a), lam(c), lam(b)};
          dd2[at3(a, c, b)] = divided_difference_cached(f, p, cache);
        }
  }
  if (max_len >= 3) {
    dd3.resize(static_cast<std::size_t>(d * d * d * d));
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index e = 0; e < d; ++e)
          for (Eigen::Index b = 0; b < d; ++b) {
            const double p[] = {lam(a), lam(c), lam(e), lam(b)};
            dd3[at4(a, c, e, b)] = divided_difference_cached(f, p, cache);
          }
  }

  for (unsigned s = 1; s < kJetSize; ++s) {
    if ((s & ~sup) != 0) continue;
    std::vector<std::vector<unsigned>> parts;
    std::vector<unsigned> prefix;
    ordered_partitions(s, prefix, parts);
    CDense rs = CDense::Zero(d, d);
    bool any = false;
    for (const auto& blocks : parts) {
      bool ok = true;
      for (unsigned b : blocks) ok = ok && m.has(b);
      if (!ok) continue;
      any = true;
      if (blocks.size() == 1) {
        const CDense& n1 = nt[blocks[0]];
        for (Eigen::Index a = 0; a < d; ++a)
          for (Eigen::Index b = 0; b < d; ++b) rs(a, b) += dd1[at2(a, b)] * n1(a, b);
      } else if (blocks.size() == 2) {
        const CDense& n1 = nt[blocks[0]];
        const CDense& n2 = nt[blocks[1]];
        for (Eigen::Index a = 0; a < d; ++a)
          for (Eigen::Index b = 0; b < d; ++b) {
            Cplx acc = 0;
            for (Eigen::Index c = 0; c < d; ++c) acc += dd2[at3(a, c, b)] * n1(a, c) * n2(c, b);
            rs(a, b) += acc;
          }
      } else {
        const CDense& n1 = nt[blocks[0]];
        const CDense& n2 = nt[blocks[1]];
        const CDense& n3 = nt[blocks[2]];
        for (Eigen::Index a = 0; a < d; ++a)
          for (Eigen::Index b = 0; b < d; ++b) {
            Cplx acc = 0;
            for (Eigen::Index c = 0; c < d; ++c)
              for (Eigen::Index e = 0; e < d; ++e)
                acc += dd3[at4(a, c, e, b)] * n1(a, c) * n2(c, e) * n3(e, b);
            rs(a, b) += acc;
          }
      }
    }
    if (any) out.set_part(s, u * rs * u.adjoint());
  }
  return out;
}

const QuadratureRule& gauss_legendre_unit(int n) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> rules;
  std::lock_guard lock(mu);
  auto it = rules.find(n);
  if (it != rules.end()) return it->second;
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
    }
    rule.nodes[i] = 0.5 * (1 - x);
    rule.weights[i] = 1.0 / ((1 - x * x) * dp * dp);
  }
  return rules.emplace(n, std::move(rule)).first->second;
}

}  // namespace biform
