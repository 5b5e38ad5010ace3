#pragma once

// Contrast bi-forms and the structures they induce: metric, connection,
// dual pair, and the torsion classification.
//
// Sign convention: conventional divergences D (KL, vNU, squared distance)
// enter as  w = -d^L d^R D  and  S = -d^R D,  which makes the induced metric
// -d_x d_y D on the diagonal positive. A global sign does not change any
// torsion statement.

#include <cstdint>
#include <string>
#include <vector>

#include "biform/biform.hpp"
#include "biform/kernels.hpp"

namespace biform {

inline constexpr double kContrastSign = -1.0;

/// Where and how the pointwise checks run.
struct ProbeOptions {
  int count = 25;
  std::uint64_t seed = 0x5eedULL;
  std::vector<Point> points;  // used as given when nonempty
  DiffContext ctx{};
  Execution exec = Execution::Serial;
  double symmetry_tol = 1e-9;
  double min_rcond = 1e-12;

  std::vector<Point> resolve(const ChartManifold& chart) const;
  /// symmetry_tol with jets; never below classify_tolerance with central
  /// differences, whose mixed partials are only approximately symmetric.
  double symmetry_threshold(const DiffContext& c) const;
};

/// A (1,1) bi-form whose diagonal pullback was verified symmetric and
/// nondegenerate at the probe points.
class ContrastBiForm {
 public:
  /// ContrastError on wrong degree, asymmetry or a degenerate pullback; the
  /// message names the offending probe point.
  explicit ContrastBiForm(BiForm form, ProbeOptions probes = {});

  const BiForm& form() const { return form_; }
  const ChartPtr& chart() const { return form_.chart(); }
  const ProbeOptions& options() const { return options_; }
  const std::vector<Point>& probes() const { return probes_; }
  const DiffContext& context() const { return options_.ctx; }
  /// Non-fatal findings, e.g. a contrast function not vanishing on the diagonal.
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  BiForm form_;
  ProbeOptions options_;
  std::vector<Point> probes_;
  std::vector<std::string> warnings_;
};

/// A (0,1) bi-form.
using PreContrastBiForm = BiForm;

/// w = -d^L d^R F. Warns when F or its first derivatives do not vanish on the
/// diagonal.
ContrastBiForm biform_from_contrast(const TwoPointScalar& F, const ProbeOptions& probes = {});
/// w = d^L S.
ContrastBiForm biform_from_precontrast(const PreContrastBiForm& S, const ProbeOptions& probes = {});

/// g_ij(x) = w(d_i | d_j)(x, x). ContrastError if asymmetric where evaluated.
MetricField induced_metric(const ContrastBiForm& w);
/// g(nabla_{d_i} d_j, d_k) = d/dm^i w(d_j | d_k)(m, x) at m = x.
Connection induced_connection(const ContrastBiForm& w);

struct DualStructure {
  MetricField metric;
  Connection connection;
};
/// (iota^* s^* w, induced_connection(s^* w)).
DualStructure dual_structure(const ContrastBiForm& w);

enum class StructureClass { Statistical, Smat, DualSmat, Lauritzen };
const char* structure_name(StructureClass c);

struct Classification {
  StructureClass kind;
  SweepStats left;         // |iota^* d^L w|
  SweepStats right;        // |iota^* d^R w|
  SweepStats proposition;  // |iota^* d^L w - lowered torsion of nabla^w|
  double tol;
};

/// Default "is zero" threshold for the probe maxima: 1e-7 with jets, 1e-4 with
/// central differences.
double classify_tolerance(const DiffContext& ctx);

/// tol < 0 selects classify_tolerance(ctx).
Classification classify(const ContrastBiForm& w, double tol = -1.0);

// ---------------------------------------------------------------------------
// Residual helpers, all max/mean over the bi-form's probe points

/// Largest |T^k_ij| of the connection's torsion.
SweepStats torsion_residual(const Connection& nabla, const std::vector<Point>& probes, const DiffContext& ctx = {},
                            Execution exec = Execution::Serial);
/// Z g(X,Y) - g(nabla_Z X, Y) - g(X, dual_Z Y) over coordinate fields X, Y, Z.
SweepStats conjugacy_residual(const MetricField& g, const Connection& nabla, const Connection& dual,
                              const std::vector<Point>& probes, const DiffContext& ctx = {},
                              Execution exec = Execution::Serial);
/// |g_ij - g_ji| of iota^* w.
SweepStats symmetry_residual(const ContrastBiForm& w);
/// Largest component of a tensor over the probes.
template <class Field>
SweepStats component_residual(const Field& f, const std::vector<Point>& probes, const DiffContext& ctx = {},
                              Execution exec = Execution::Serial) {
  return sweep(probes, [&](const Point& p) { return max_abs(f.at(p, ctx)); }, exec);
}
SweepStats component_residual(const BlockAlternatingTensor& t, const std::vector<Point>& probes,
                              const DiffContext& ctx = {}, Execution exec = Execution::Serial);

}  // namespace biform
