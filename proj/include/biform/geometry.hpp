#pragma once

// Single-chart differential geometry: charts, tensor fields evaluated through
// the jet engine, and the pointwise operators the bi-form calculus builds on.
//
// Index conventions (flattened row-major):
//   VectorField / OneForm   [k]
//   MetricField / TwoForm   [i][j]
//   Connection              [k][i][j] = Gamma^k_{ij}, with nabla_{d_i} d_j = Gamma^k_{ij} d_k
//   TorsionField            [k][i][j] = T^k_{ij}
//   LoweredTorsion          [i][j][l] = g_{kl} T^k_{ij}

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "biform/jet.hpp"
#include "biform/jet_matrix.hpp"
#include "biform/random.hpp"

namespace biform {

struct Point {
  std::vector<double> coords;
};

class ChartManifold {
 public:
  using Predicate = std::function<bool(std::span<const double>)>;
  struct Box {
    std::vector<double> lo, hi;
  };

  /// `box` bounds the sampling region; `domain` decides membership.
  ChartManifold(int dim, Predicate domain, Box box, std::string label);

  /// Whole R^dim, sampled from `box`.
  static std::shared_ptr<const ChartManifold> euclidean(int dim, Box box, std::string label = "R^n");
  /// The open box itself is the domain.
  static std::shared_ptr<const ChartManifold> open_box(Box box, std::string label);

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  const Box& box() const { return box_; }
  bool contains(std::span<const double> x) const;
  /// Throws DomainError when x is outside.
  void require(std::span<const double> x) const;

  /// Rejection sampling with a margin toward the boundary: candidates are
  /// drawn from the box shrunk by `margin` about its center, and accepted only
  /// if the candidate pushed out by 1/margin is still in the domain.
  std::vector<Point> sample(Rng& rng, int count, double margin = 0.9) const;

  /// Fraction of `samples` random points within `radius` of p that fall
  /// outside the domain. Zero for accepted points of an open set.
  double ball_escape_fraction(const Point& p, double radius, int samples, Rng& rng) const;

 private:
  int dim_;
  Predicate domain_;
  Box box_;
  std::string label_;
};

using ChartPtr = std::shared_ptr<const ChartManifold>;

std::size_t ipow(int base, int exp);

/// A tensor-valued field on a chart, evaluated lazily as jets. Rank fixes the
/// number of components (dim^Rank); Tag keeps variance kinds apart.
template <int Rank, class Tag>
class TensorField {
 public:
  using Fn = std::function<JetVec(std::span<const Jet>, const DiffContext&)>;
  static constexpr int rank = Rank;

  TensorField(ChartPtr chart, Fn fn) : chart_(std::move(chart)), fn_(std::move(fn)) {
    if (!chart_) throw Error("TensorField: null chart");
  }

  const ChartPtr& chart() const { return chart_; }
  int dim() const { return chart_->dim(); }
  std::size_t size() const { return ipow(dim(), Rank); }

  JetVec eval(std::span<const Jet> x, const DiffContext& ctx) const {
    JetVec out = fn_(x, ctx);
    if (out.size() != size()) throw Error("TensorField: evaluator returned wrong component count");
    return out;
  }

  /// Plain values at a point of the domain.
  std::vector<double> at(const Point& p, const DiffContext& ctx = {}) const {
    chart_->require(p.coords);
    const JetVec x = constant_jets(p.coords);
    return values(eval(x, ctx));
  }

 private:
  ChartPtr chart_;
  Fn fn_;
};

struct ScalarTag {};
struct VectorTag {};
struct OneFormTag {};
struct MetricTag {};
struct TwoFormTag {};
struct ConnectionTag {};
struct TorsionTag {};
struct CovariantTag {};
struct FrameMatrixTag {};

using ScalarField = TensorField<0, ScalarTag>;
using VectorField = TensorField<1, VectorTag>;
using OneForm = TensorField<1, OneFormTag>;
using MetricField = TensorField<2, MetricTag>;
/// Antisymmetric covariant 2-tensor field, e.g. d(alpha).
using TwoForm = TensorField<2, TwoFormTag>;
using Connection = TensorField<3, ConnectionTag>;
using TorsionField = TensorField<3, TorsionTag>;
using LoweredTorsion = TensorField<3, CovariantTag>;
/// General covariant 2-tensor field, e.g. nabla(alpha).
using Covariant2Tensor = TensorField<2, CovariantTag>;
/// [j][k] = alpha^j_k for a coframe {alpha^j}.
using FrameMatrixField = TensorField<2, FrameMatrixTag>;

// ---------------------------------------------------------------------------
// Construction helpers

using JetFunction = std::function<Jet(std::span<const Jet>)>;

ScalarField scalar_field(ChartPtr chart, JetFunction f);
ScalarField constant_scalar(ChartPtr chart, double c);
/// Field known only through double evaluations; usable in central-difference
/// mode, rejects seeded jets.
ScalarField black_box_scalar(ChartPtr chart, std::function<double(std::span<const double>)> f);
/// Variables x0, x1, ... (and x, y, z when dim <= 3); see expression.hpp.
ScalarField parse_scalar_field(ChartPtr chart, const std::string& expression);

VectorField vector_field(ChartPtr chart, const std::vector<ScalarField>& components);
VectorField constant_vector(ChartPtr chart, std::vector<double> components);
VectorField coordinate_vector(ChartPtr chart, int k);
OneForm one_form(ChartPtr chart, const std::vector<ScalarField>& components);
OneForm constant_one_form(ChartPtr chart, std::vector<double> components);
/// df
OneForm differential(const ScalarField& f);
/// Entries g_{ij} in row-major order.
MetricField metric_field(ChartPtr chart, const std::vector<ScalarField>& entries);
MetricField constant_metric(ChartPtr chart, const Eigen::MatrixXd& g);
Connection connection_field(ChartPtr chart, const std::vector<ScalarField>& christoffels);
Connection flat_connection(ChartPtr chart);

// ---------------------------------------------------------------------------
// Pointwise helpers

/// Partial derivatives of a field's components at x: result[i] = d_i field.
template <int R, class T>
std::vector<JetVec> partials(const TensorField<R, T>& f, std::span<const Jet> x, const DiffContext& ctx) {
  std::vector<JetVec> out;
  out.reserve(static_cast<std::size_t>(f.dim()));
  for (int i = 0; i < f.dim(); ++i) {
    out.push_back(derive(ctx, [&](const Jet& t, const DiffContext& inner) {
      JetVec y(x.begin(), x.end());
      y[static_cast<std::size_t>(i)] += t;
      return f.eval(y, inner);
    }));
  }
  return out;
}

/// Metric value as a jet matrix, with the condition guard applied.
RJetMatrix metric_matrix(const MetricField& g, std::span<const Jet> x, const DiffContext& ctx);
/// Gamma_{ij,k} (layout [i][j][k]) -> Gamma^l_{ij} (layout [l][i][j]) with g^{-1}.
JetVec raise_christoffels(const JetVec& lowered, const RJetMatrix& ginv, std::size_t n);
/// Inverse of a metric/frame matrix at x; LinearSolveError names the point.
RJetMatrix checked_inverse(const RJetMatrix& m, std::span<const Jet> x, const char* what);

// ---------------------------------------------------------------------------
// Operators

ScalarField directional_derivative(const ScalarField& f, const VectorField& X);
VectorField lie_bracket(const VectorField& X, const VectorField& Y);
TwoForm exterior_derivative(const OneForm& alpha);
/// Z with i_Z g = alpha.
VectorField gradient_field(const MetricField& g, const OneForm& alpha);
VectorField covariant_derivative(const Connection& nabla, const VectorField& Z, const VectorField& X);
/// (nabla_{d_i} alpha)_j = d_i alpha_j - Gamma^k_{ij} alpha_k, flattened [i][j].
Covariant2Tensor covariant_derivative_form(const Connection& nabla, const OneForm& alpha);
TorsionField torsion_tensor(const Connection& nabla);
LoweredTorsion lower_torsion(const TorsionField& torsion, const MetricField& g);
/// Gamma-dagger_{ij,k} = d_i g_{jk} - Gamma_{ij,k}, raised with g^{-1}.
Connection conjugate_connection(const MetricField& g, const Connection& nabla);
Connection levi_civita(const MetricField& g);

/// g(X, Y) as a scalar field.
ScalarField metric_pairing(const MetricField& g, const VectorField& X, const VectorField& Y);
/// Z g(X,Y) - g(nabla_Z X, Y) - g(X, dual_Z Y).
ScalarField conjugacy_defect(const MetricField& g, const Connection& nabla, const Connection& dual,
                             const VectorField& Z, const VectorField& X, const VectorField& Y);
/// Coordinate-free torsion nabla_X Y - nabla_Y X - [X, Y].
VectorField torsion_of_fields(const Connection& nabla, const VectorField& X, const VectorField& Y);

/// Random polynomial-trigonometric vector field (test corpora).
VectorField random_vector_field(ChartPtr chart, Rng& rng);

}  // namespace biform
