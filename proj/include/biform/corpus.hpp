#pragma once

// Contrast functions and pre-contrast bi-forms used by tests and scenarios.

#include "biform/biform.hpp"

namespace biform {

/// (mu, sigma) with sigma > 0, sampled from [-2, 2] x [0.5, 3].
ChartPtr gaussian_chart();
/// KL(N(mu1, s1^2) || N(mu2, s2^2)) with m = (mu1, s1), n = (mu2, s2).
TwoPointScalar gaussian_kl(const ChartPtr& chart);
/// 1/2 |m - n|^2.
TwoPointScalar squared_euclidean(const ChartPtr& chart);

/// Bregman divergence of phi(x) = |x|^2/2 + sum_k c_k exp(a_k . x), c_k > 0.
TwoPointScalar random_bregman(const ChartPtr& chart, Rng& rng);
/// |m - n|^2/2 + eps (G(m,n) + G(n,m)) with random smooth G: mixed diagonal
/// Hessian symmetric and close to the identity, not a contrast function.
TwoPointScalar random_symmetric_two_point(const ChartPtr& chart, Rng& rng, double eps = 0.05);
/// -d^R H for a random symmetric H, plus a random (0,1) form vanishing to
/// second order on the diagonal. d^L S has a symmetric nondegenerate pullback
/// and generically a torsionful dual.
BiForm random_precontrast(const ChartPtr& chart, Rng& rng);

}  // namespace biform
