#pragma once

// Teleparallel structures from a global coframe {alpha^j}: the connection
// making every alpha^j parallel, the g-gradient frame Z_j with its dual
// coframe beta, and the canonical contrast bi-form sum_j alpha^j (x) beta^j.

#include <functional>
#include <vector>

#include "biform/potentials.hpp"

namespace biform {

class Coframe {
 public:
  /// FrameError unless there are exactly dim one-forms on a common chart.
  Coframe(ChartPtr chart, std::vector<OneForm> alphas);

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return chart_->dim(); }
  const std::vector<OneForm>& alphas() const { return alphas_; }
  const OneForm& operator[](std::size_t j) const { return alphas_[j]; }
  /// [j][k] = alpha^j_k.
  FrameMatrixField matrix() const;
  /// FrameError naming the first probe point where the frame degenerates.
  void require_frame(const std::vector<Point>& probes, const DiffContext& ctx = {}) const;

 private:
  ChartPtr chart_;
  std::vector<OneForm> alphas_;
};

/// Gamma^k_ij = e_a^k d_i alpha^a_j, {e_a} the dual frame.
Connection teleparallel_connection(const Coframe& B);

struct GradientFrame {
  std::vector<VectorField> Z;  // i_{Z_j} g = alpha^j
  std::vector<OneForm> beta;   // beta^i(Z_j) = delta^i_j
};
GradientFrame gradient_frame(const MetricField& g, const Coframe& B);

/// w_ij(m, n) = w(Z_i(m) | Z_j(n)).
TwoPointScalar frame_coefficient(const BiForm& w, const GradientFrame& frame, std::size_t i, std::size_t j);
/// sum_ij w_ij pi_L^*(beta^i) (x) pi_R^*(beta^j), row-major coefficients.
BiForm biform_from_frame_coefficients(const GradientFrame& frame, const std::vector<TwoPointScalar>& w);
/// The representative w_ij = pi_L^* g(Z_i, Z_j).
std::vector<TwoPointScalar> canonical_coefficients(const MetricField& g, const GradientFrame& frame);

/// sum_j pi_L^*(alpha^j) (x) pi_R^*(beta^j). Asserts iota^* w = g at the probe
/// points within 1e-9.
ContrastBiForm canonical_biform(const MetricField& g, const Coframe& B, const ProbeOptions& probes = {});

/// Residual checks of a candidate solution of (g^w, nabla^w) = (g, nabla)
/// written in the gradient frame of B; maxima over w's probe points, taken
/// over all i, j and coordinate directions Z.
struct InverseProblemReport {
  SweepStats connection;  // iota^*(L_{Z^L} w_ij) - g(nabla_Z Z_i, Z_j)
  SweepStats metric;      // iota^* w_ij - g(Z_i, Z_j)
  SweepStats exterior;    // iota^* d^L w_ij - d g(Z_i, Z_j)
  double tol;
  bool pass;
};
InverseProblemReport verify_inverse_problem(const ContrastBiForm& w, const MetricField& g, const Connection& nabla,
                                            const Coframe& B, double tol = 1e-8);

/// max_j |nabla alpha^j| over the probes.
SweepStats covariant_constancy_residual(const Connection& nabla, const Coframe& B, const std::vector<Point>& probes,
                                        const DiffContext& ctx = {}, Execution exec = Execution::Serial);
/// max_j |d alpha^j| over the probes.
SweepStats closedness_residual(const Coframe& B, const std::vector<Point>& probes, const DiffContext& ctx = {},
                               Execution exec = Execution::Serial);
/// max_j |alpha^j - sum_i g(Z_i, Z_j) beta^i| and max |beta^i(Z_j) - delta|.
SweepStats frame_relation_residual(const MetricField& g, const Coframe& B, const std::vector<Point>& probes,
                                   const DiffContext& ctx = {});
SweepStats frame_duality_residual(const GradientFrame& frame, const std::vector<Point>& probes,
                                  const DiffContext& ctx = {});

// ---------------------------------------------------------------------------
// Corpus

/// {dx, dy} on R^2.
Coframe cartesian_coframe(const ChartPtr& plane);
/// {dx, e^x dy} on R^2.
Coframe exponential_coframe(const ChartPtr& plane);
/// Annulus 0.5 < r < 2 in polar coordinates (r, theta).
ChartPtr annulus_chart();
/// {d(r cos t), d(r sin t)}: closed.
Coframe polar_cartesian_coframe(const ChartPtr& annulus);
/// {dr, r dt}: not closed.
Coframe polar_orthonormal_coframe(const ChartPtr& annulus);
/// diag(1, r^2).
MetricField polar_metric(const ChartPtr& annulus);
/// Random coframe close to the identity (smooth entries).
Coframe random_coframe(const ChartPtr& chart, Rng& rng);

}  // namespace biform
