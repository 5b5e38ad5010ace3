#pragma once

// (p,q)-bi-forms on the Cartesian square M x M of a chart, p,q <= 2.
//
// A bi-form is stored as a lazy evaluator returning its full coefficient
// tensor at a point pair (m, n): dim^(p+q) jets, flattened row-major as
// [left indices][right indices], antisymmetric within each block. Evaluating
// on tangent vectors is plain contraction, so for a (2,0) form
// w(u1, u2) = sum_ab w_ab u1^a u2^b.

#include <functional>
#include <span>
#include <vector>

#include "biform/geometry.hpp"

namespace biform {

inline constexpr int kMaxBlockDegree = 2;

class BiForm {
 public:
  using Fn = std::function<JetVec(std::span<const Jet> m, std::span<const Jet> n, const DiffContext&)>;
  /// Membership of (m, n) in the open neighborhood of the diagonal on which
  /// the bi-form is defined. Empty means the whole square.
  using Neighborhood = std::function<bool(std::span<const double> m, std::span<const double> n)>;

  BiForm(ChartPtr chart, int p, int q, Fn fn, Neighborhood neighborhood = {});

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return chart_->dim(); }
  int left_degree() const { return p_; }
  int right_degree() const { return q_; }
  std::size_t size() const { return ipow(dim(), p_ + q_); }
  const Neighborhood& neighborhood() const { return neighborhood_; }
  bool in_neighborhood(std::span<const double> m, std::span<const double> n) const;

  JetVec coefficients(std::span<const Jet> m, std::span<const Jet> n, const DiffContext& ctx) const;

  /// w(u_1..u_p | v_1..v_q)(m, n) for jet arguments.
  Jet contract(std::span<const Jet> m, std::span<const Jet> n, std::span<const JetVec> u,
               std::span<const JetVec> v, const DiffContext& ctx) const;

  /// w(u_1..u_p | v_1..v_q)(m, n). ArityError when counts differ from (p, q).
  double evaluate(const Point& m, const Point& n, const std::vector<std::vector<double>>& u,
                  const std::vector<std::vector<double>>& v, const DiffContext& ctx = {}) const;

  /// Same degrees and chart; coefficients add.
  friend BiForm operator+(const BiForm& a, const BiForm& b);
  friend BiForm operator-(const BiForm& a, const BiForm& b);
  friend BiForm operator*(double s, const BiForm& a);

 private:
  ChartPtr chart_;
  int p_, q_;
  Fn fn_;
  Neighborhood neighborhood_;
};

/// A (0,0) bi-form: a smooth function on M x M.
using TwoPointScalar = BiForm;

using TwoPointFunction = std::function<Jet(std::span<const Jet> m, std::span<const Jet> n)>;

TwoPointScalar two_point_scalar(ChartPtr chart, TwoPointFunction f);
/// Variables m0, m1, ... (left point) and n0, n1, ... (right point).
TwoPointScalar parse_two_point_scalar(ChartPtr chart, const std::string& expression);
/// pi_L^* f
TwoPointScalar left_lift(const ScalarField& f);
/// pi_R^* f
TwoPointScalar right_lift(const ScalarField& f);

/// pi_L^* alpha as a (1,0) bi-form.
BiForm left_pullback(const OneForm& alpha);
/// pi_R^* beta as a (0,1) bi-form.
BiForm right_pullback(const OneForm& beta);
/// sum_j pi_L^*(left_j) (x) pi_R^*(right_j) as a (1,1) bi-form.
BiForm tensor_sum(const std::vector<OneForm>& left, const std::vector<OneForm>& right);
/// Multiplies a bi-form by a two-point scalar.
BiForm scale(const TwoPointScalar& f, const BiForm& w);
/// Restricts the diagonal neighborhood.
BiForm with_neighborhood(const BiForm& w, BiForm::Neighborhood neighborhood);

/// Sections of Lambda^p T*M (x) Lambda^q T*M: covariant (p+q)-tensor fields
/// alternating in the first p and the last q slots.
class BlockAlternatingTensor {
 public:
  using Fn = std::function<JetVec(std::span<const Jet> x, const DiffContext&)>;

  BlockAlternatingTensor(ChartPtr chart, int p, int q, Fn fn);

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return chart_->dim(); }
  int left_degree() const { return p_; }
  int right_degree() const { return q_; }
  std::size_t size() const { return ipow(dim(), p_ + q_); }

  JetVec eval(std::span<const Jet> x, const DiffContext& ctx) const;
  /// Components at a domain point, flattened like the source bi-form.
  std::vector<double> components(const Point& x, const DiffContext& ctx = {}) const;
  double evaluate(const Point& x, const std::vector<std::vector<double>>& tangents,
                  const DiffContext& ctx = {}) const;

 private:
  ChartPtr chart_;
  int p_, q_;
  Fn fn_;
};

// ---------------------------------------------------------------------------
// Structural operators

/// (m, n) -> w(X_1(m), ..., X_p(m) | Y_1(n), ..., Y_q(n)).
TwoPointScalar pair(const BiForm& w, const std::vector<VectorField>& X, const std::vector<VectorField>& Y);
/// Evaluation at coincident points. DomainError off the diagonal neighborhood.
BlockAlternatingTensor diagonal_pullback(const BiForm& w);
/// (s^* w)(X | Y)(m, n) = w(Y | X)(n, m).
BiForm swap_pullback(const BiForm& w);
/// Left differential on the coordinate frame, extended by multilinearity.
BiForm left_differential(const BiForm& w);
/// s^* d^L s^*.
BiForm right_differential(const BiForm& w);

/// L_{X^L} F: derivative of a two-point scalar along X in the left slot only.
TwoPointScalar left_lie_derivative(const TwoPointScalar& f, const VectorField& X);
/// L_{X^R} F.
TwoPointScalar right_lie_derivative(const TwoPointScalar& f, const VectorField& X);

/// The left differential paired with arbitrary vector fields, computed from
/// the global formula: alternating left Lie derivatives of pairings plus the
/// bracket terms. Independent of left_differential; p <= 1.
TwoPointScalar left_differential_paired(const BiForm& w, const std::vector<VectorField>& X,
                                        const std::vector<VectorField>& Y);

/// Random bi-form with polynomial/trigonometric coefficients (test corpora).
BiForm random_biform(ChartPtr chart, int p, int q, Rng& rng);

}  // namespace biform
