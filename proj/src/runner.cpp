#include "biform/runner.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "biform/corpus.hpp"
#include "biform/quantum.hpp"
#include "biform/teleparallel.hpp"
#include "json.hpp"

namespace biform {

namespace {

using json = nlohmann::json;

const std::vector<std::string> kScenarios = {"bicomplex-identities", "eguchi-euclidean",     "eguchi-gaussian-kl",
                                             "teleparallel-2d",      "qubit-vnu-bkm",        "qubit-monotone-profile",
                                             "qutrit-smoke"};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SweepStats spot(double v) { return {std::abs(v), std::abs(v), 1, 0}; }

class Recorder {
 public:
  Recorder(ScenarioRecord& rec, const RunConfig& cfg) : rec_(rec), cfg_(cfg) {}

  /// Tolerance for a derivative-based residual: the pinned value with jets,
  /// never below the classification threshold with central differences.
  double derived(double base) const {
    return cfg_.mode == DiffMode::TaylorJet ? base : std::max(base, cfg_.effective_classify_tol());
  }

  void upper(const std::string& name, const SweepStats& s, double tol) {
    rec_.residuals.push_back({name, s, tol, Bound::Upper, s.max < tol});
  }
  void lower(const std::string& name, const SweepStats& s, double tol) {
    rec_.residuals.push_back({name, s, tol, Bound::Lower, s.max > tol});
  }
  void classification(const std::string& label, StructureClass expected, StructureClass actual) {
    rec_.classifications.push_back({label, structure_name(expected), structure_name(actual), expected == actual});
  }

 private:
  ScenarioRecord& rec_;
  const RunConfig& cfg_;
};

ProbeOptions probe_options(const RunConfig& cfg, Rng& rng, int count) {
  ProbeOptions o;
  o.count = count;
  o.seed = static_cast<std::uint64_t>(rng.uniform() * 0x1.0p53);
  o.ctx = cfg.context();
  o.exec = cfg.execution();
  return o;
}

Eigen::MatrixXd as_matrix(const std::vector<double>& v, int n) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), n, n);
}

// ---------------------------------------------------------------------------
// Scenarios

void bicomplex_identities(const RunConfig& cfg, Rng& rng, Recorder& r) {
  const ChartPtr c = ChartManifold::euclidean(2, {{-1.5, -1.5}, {1.5, 1.5}}, "R2");
  const DiffContext ctx = cfg.context();
  SweepStats ll, rr, lr;
  const auto coefficient_sweep = [&](const BiForm& w, const std::vector<Point>& pairs) {
    return sweep(
        pairs,
        [&](const Point& z) {
          const std::span<const double> x(z.coords);
          return max_abs(values(w.coefficients(constant_jets(x.first(2)), constant_jets(x.last(2)), ctx)));
        },
        cfg.execution());
  };
  for (int k = 0; k < cfg.forms; ++k) {
    const int p = k % 2, q = (k / 2) % 2;
    const BiForm w = random_biform(c, p, q, rng);
    const BiForm comm = left_differential(right_differential(w)) - right_differential(left_differential(w));
    const BiForm dll = left_differential(left_differential(random_biform(c, 0, q, rng)));
    const BiForm drr = right_differential(right_differential(random_biform(c, p, 0, rng)));
    std::vector<Point> pairs;
    for (int t = 0; t < cfg.tuples; ++t) {
      const auto pts = c->sample(rng, 2);
      Point z = pts[0];
      z.coords.insert(z.coords.end(), pts[1].coords.begin(), pts[1].coords.end());
      pairs.push_back(std::move(z));
    }
    ll = combine(ll, coefficient_sweep(dll, pairs));
    rr = combine(rr, coefficient_sweep(drr, pairs));
    lr = combine(lr, coefficient_sweep(comm, pairs));
  }
  r.upper("dL_dL", ll, r.derived(cfg.identity_tol));
  r.upper("dR_dR", rr, r.derived(cfg.identity_tol));
  r.upper("dL_dR-dR_dL", lr, r.derived(cfg.identity_tol));
}

void eguchi_euclidean(const RunConfig& cfg, Rng& rng, Recorder& r) {
  const ChartPtr c = ChartManifold::euclidean(2, {{-1, -1}, {1, 1}}, "R2");
  const ContrastBiForm w = biform_from_contrast(squared_euclidean(c), probe_options(cfg, rng, cfg.probes));
  const DiffContext ctx = w.context();
  const MetricField g = induced_metric(w);
  r.upper("metric-identity",
          sweep(w.probes(),
                [&](const Point& p) {
                  return (as_matrix(g.at(p, ctx), 2) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
                }),
          r.derived(1e-12));
  r.upper("connection", component_residual(induced_connection(w), w.probes(), ctx, cfg.execution()),
          r.derived(1e-12));
  r.upper("dual_connection", component_residual(dual_structure(w).connection, w.probes(), ctx, cfg.execution()),
          r.derived(1e-12));
  const Classification k = classify(w, cfg.classify_tol);
  r.upper("proposition", k.proposition, r.derived(1e-8));
  r.classification("squared-euclidean", StructureClass::Statistical, k.kind);

  // forward directions over random corpora
  const int members = 10;
  const int probes = std::min(cfg.probes, 10);
  SweepStats t1, t1_prop, t2, t2_dual, t2_asym, t2_prop;
  for (int i = 0; i < members; ++i) {
    const ContrastBiForm a = biform_from_precontrast(random_precontrast(c, rng), probe_options(cfg, rng, probes));
    t1 = combine(t1, torsion_residual(induced_connection(a), a.probes(), ctx, cfg.execution()));
    t1_prop = combine(t1_prop, classify(a, cfg.classify_tol).proposition);
    const TwoPointScalar F = i % 2 ? random_bregman(c, rng) : random_symmetric_two_point(c, rng);
    const ContrastBiForm b = biform_from_contrast(F, probe_options(cfg, rng, probes));
    t2 = combine(t2, torsion_residual(induced_connection(b), b.probes(), ctx, cfg.execution()));
    t2_dual = combine(t2_dual, torsion_residual(dual_structure(b).connection, b.probes(), ctx, cfg.execution()));
    t2_asym = combine(t2_asym, symmetry_residual(b));
    t2_prop = combine(t2_prop, classify(b, cfg.classify_tol).proposition);
  }
  r.upper("left-exact.torsion", t1, r.derived(1e-8));
  r.upper("left-exact.proposition", t1_prop, r.derived(1e-8));
  r.upper("bi-exact.torsion", t2, r.derived(1e-8));
  r.upper("bi-exact.dual_torsion", t2_dual, r.derived(1e-8));
  r.upper("bi-exact.asymmetry", t2_asym, r.derived(1e-9));
  r.upper("bi-exact.proposition", t2_prop, r.derived(1e-8));
}

void eguchi_gaussian_kl(const RunConfig& cfg, Rng& rng, Recorder& r) {
  const ChartPtr c = gaussian_chart();
  const ContrastBiForm w = biform_from_contrast(gaussian_kl(c), probe_options(cfg, rng, cfg.probes));
  const DiffContext ctx = w.context();
  const MetricField g = induced_metric(w);
  const Connection nabla = induced_connection(w);
  const Connection dual = dual_structure(w).connection;
  r.upper("fisher-metric",
          sweep(w.probes(),
                [&](const Point& p) {
                  const double s = p.coords[1];
                  const Eigen::Matrix2d fisher = Eigen::Vector2d(1 / (s * s), 2 / (s * s)).asDiagonal();
                  return (as_matrix(g.at(p, ctx), 2) - fisher).cwiseAbs().maxCoeff();
                }),
          r.derived(1e-6));
  r.upper("conjugacy", conjugacy_residual(g, nabla, dual, w.probes(), ctx, cfg.execution()), r.derived(1e-8));
  r.upper("torsion", torsion_residual(nabla, w.probes(), ctx, cfg.execution()), r.derived(1e-8));
  r.upper("dual_torsion", torsion_residual(dual, w.probes(), ctx, cfg.execution()), r.derived(1e-8));
  r.upper("asymmetry", symmetry_residual(w), r.derived(1e-9));
  const Classification k = classify(w, cfg.classify_tol);
  r.upper("proposition", k.proposition, r.derived(1e-8));
  r.classification("gaussian-kl", StructureClass::Statistical, k.kind);
}

void teleparallel_2d(const RunConfig& cfg, Rng& rng, Recorder& r) {
  const ChartPtr plane = ChartManifold::euclidean(2, {{-1.5, -1.5}, {1.5, 1.5}}, "R2");
  const ChartPtr annulus = annulus_chart();
  const MetricField flat = constant_metric(plane, Eigen::Matrix2d::Identity());
  struct Case {
    const char* name;
    MetricField g;
    Coframe B;
  };
  const std::vector<Case> cases = {{"cartesian", flat, cartesian_coframe(plane)},
                                   {"exponential", flat, exponential_coframe(plane)},
                                   {"polar-cartesian", polar_metric(annulus), polar_cartesian_coframe(annulus)},
                                   {"polar-orthonormal", polar_metric(annulus), polar_orthonormal_coframe(annulus)}};
  const double tol = r.derived(1e-8);
  const double ctol = cfg.effective_classify_tol();
  for (const auto& cs : cases) {
    const std::string n = cs.name;
    const ContrastBiForm w = canonical_biform(cs.g, cs.B, probe_options(cfg, rng, cfg.probes));
    const DiffContext ctx = w.context();
    const Connection nabla = teleparallel_connection(cs.B);
    const InverseProblemReport ip = verify_inverse_problem(w, cs.g, nabla, cs.B, tol);
    r.upper(n + ".connection", ip.connection, tol);
    r.upper(n + ".metric", ip.metric, tol);
    r.upper(n + ".exterior", ip.exterior, tol);
    const Classification k = classify(w, cfg.classify_tol);
    r.upper(n + ".proposition", k.proposition, tol);
    // expected class from the torsion tensors computed directly
    const bool left = torsion_residual(nabla, w.probes(), ctx).max < ctol;
    const bool right = torsion_residual(conjugate_connection(cs.g, nabla), w.probes(), ctx).max < ctol;
    const StructureClass expected = left && right ? StructureClass::Statistical
                                    : left        ? StructureClass::Smat
                                    : right       ? StructureClass::DualSmat
                                                  : StructureClass::Lauritzen;
    r.classification(n, expected, k.kind);
  }

  // Tor(d_x, d_y) = d_y for {dx, e^x dy}
  const std::vector<Point> pts = plane->sample(rng, cfg.probes);
  const TorsionField T = torsion_tensor(teleparallel_connection(exponential_coframe(plane)));
  r.upper("exponential.torsion-exact",
          sweep(pts,
                [&](const Point& p) {
                  std::vector<double> t = T.at(p, cfg.context());
                  t[1 * 4 + 0 * 2 + 1] -= 1;
                  t[1 * 4 + 1 * 2 + 0] += 1;
                  return max_abs(t);
                }),
          r.derived(1e-9));

  const Coframe B = exponential_coframe(plane);
  const ContrastBiForm w = canonical_biform(flat, B, probe_options(cfg, rng, cfg.probes));
  const OneForm dx = constant_one_form(plane, {1, 0});
  const ContrastBiForm bad(w.form() + tensor_sum({dx}, {dx}), w.options());
  r.lower("perturbed.metric", verify_inverse_problem(bad, flat, teleparallel_connection(B), B, tol).metric, 1e-3);
  const MetricField curved = metric_field(plane, {parse_scalar_field(plane, "1 + 0.3*y^2"), constant_scalar(plane, 0),
                                                  constant_scalar(plane, 0), parse_scalar_field(plane, "exp(0.5*x)")});
  const ContrastBiForm wc = canonical_biform(curved, B, probe_options(cfg, rng, cfg.probes));
  r.lower("levi-civita.connection", verify_inverse_problem(wc, curved, levi_civita(curved), B, tol).connection, 1e-3);
}

void qubit_vnu_bkm(const RunConfig& cfg, Rng& rng, Recorder& r) {
  const QuantumStateModel m = build_state_model(2, "BKM");
  const ContrastBiForm w = biform_from_contrast(vnu_contrast(m), probe_options(cfg, rng, cfg.probes));
  const DiffContext ctx = w.context();
  const MetricField g = induced_metric(w);
  const MetricField bkm = m.metric();
  r.upper("eguchi-metric-vs-bkm",
          sweep(w.probes(),
                [&](const Point& p) { return (as_matrix(g.at(p, ctx), 3) - m.metric_at(p)).cwiseAbs().maxCoeff(); }),
          r.derived(1e-6));
  r.upper("eguchi-connection", component_residual(induced_connection(w), w.probes(), ctx, cfg.execution()),
          r.derived(1e-5));
  r.upper("bkm-jet-vs-eigen",
          sweep(w.probes(),
                [&](const Point& p) { return (as_matrix(bkm.at(p), 3) - m.metric_at(p)).cwiseAbs().maxCoeff(); }),
          1e-10);
  r.upper("bkm-at-maximally-mixed", spot((m.metric_at(Point{{0, 0, 0}}) - 2 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff()),
          1e-12);
  const double s2 = std::sqrt(2.0);
  const double kl = 0.7 * std::log(0.7 / 0.6) + 0.3 * std::log(0.3 / 0.4);
  r.upper("commuting-kl-spot", spot(vnu_relative_entropy(m, Point{{0, 0, 0.2 * s2}}, Point{{0, 0, 0.1 * s2}}) - kl),
          1e-10);
  r.upper("conjugacy",
          conjugacy_residual(g, mixture_connection(m), dual_structure(w).connection, w.probes(), ctx, cfg.execution()),
          r.derived(1e-8));
  r.classification("vnu", StructureClass::Statistical, classify(w, cfg.classify_tol).kind);
}

void qubit_monotone_profile(const RunConfig& cfg, Rng& rng, Recorder& r) {
  const Point probe{{0.3, 0, 0}};
  const QuantumStateModel base = build_state_model(2, "BKM");
  std::vector<Point> pts = base.chart()->sample(rng, cfg.probes);
  pts.push_back(probe);
  const DiffContext ctx = cfg.context();
  const auto all = dual_torsion_profile(base, pts, ctx, r.derived(1e-8), cfg.execution());
  const auto at = dual_torsion_profile(base, {probe}, ctx, r.derived(1e-8), cfg.execution());
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::string f = all[i].function;
    if (f == "BKM") r.upper(f + ".dual_torsion", all[i].dual_torsion, r.derived(1e-8));
    else r.lower(f + ".dual_torsion@(0.3,0,0)", at[i].dual_torsion, 1e-3);
  }
  for (const auto& f : monotone_registry()) {
    const QuantumStateModel m = build_state_model(2, f);
    ProbeOptions o = probe_options(cfg, rng, cfg.probes);
    o.points = pts;
    const ContrastBiForm w = quantum_canonical_biform(m, o);
    const MetricField g = induced_metric(w);
    r.upper(f + ".connection", component_residual(induced_connection(w), pts, ctx, cfg.execution()), r.derived(1e-8));
    r.upper(f + ".conjugacy",
            conjugacy_residual(g, mixture_connection(m), dual_structure(w).connection, pts, ctx, cfg.execution()),
            r.derived(1e-8));
    r.classification(f, f == "BKM" ? StructureClass::Statistical : StructureClass::Smat,
                     classify(w, cfg.classify_tol).kind);

    const PreContrastBiForm S = quantum_precontrast(m);
    r.upper(f + ".precontrast.diagonal", component_residual(diagonal_pullback(S), pts, ctx, cfg.execution()), 1e-12);
    const ContrastBiForm ws = biform_from_precontrast(S, o);
    const MetricField gs = induced_metric(ws);
    r.upper(f + ".precontrast.metric",
            sweep(pts, [&](const Point& p) { return (as_matrix(gs.at(p, ctx), 3) - m.metric_at(p)).cwiseAbs().maxCoeff(); }),
            r.derived(1e-7));
    r.upper(f + ".precontrast.connection", component_residual(induced_connection(ws), pts, ctx, cfg.execution()),
            r.derived(1e-7));
  }
}

void qutrit_smoke(const RunConfig& cfg, Rng& rng, Recorder& r) {
  const QuantumStateModel m = build_state_model(3, "BKM");
  const int n = m.dim();
  const auto pts = m.chart()->sample(rng, std::min(cfg.probes, 4));
  const MetricField g = m.metric();
  r.upper("bkm-jet-vs-eigen",
          sweep(pts, [&](const Point& p) { return (as_matrix(g.at(p), n) - m.metric_at(p)).cwiseAbs().maxCoeff(); }),
          1e-10);
  double lo = INFINITY;
  for (const auto& p : pts) lo = std::min(lo, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.metric_at(p)).eigenvalues()(0));
  r.lower("metric.min_eigenvalue", spot(lo), 0.0);
  r.upper("precontrast.diagonal",
          component_residual(diagonal_pullback(quantum_precontrast(m)), pts, cfg.context(), cfg.execution()), 1e-12);
  const auto rows = dual_torsion_profile(m, pts, cfg.context(), r.derived(1e-8), cfg.execution());
  for (const auto& row : rows) {
    if (row.function == "BKM") r.upper("BKM.dual_torsion", row.dual_torsion, r.derived(1e-8));
    if (row.function == "SLD") r.lower("SLD.dual_torsion", row.dual_torsion, 1e-3);
  }
}

// ---------------------------------------------------------------------------
// Output

std::string quoted(const std::string& s) { return json(s).dump(); }

// Finite values as JSON numbers, nan/inf as strings.
std::string json_number(double x) { return std::isfinite(x) ? format_number(x) : quoted(format_number(x)); }

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

std::string tol_text(const ResidualRow& row) {
  return (row.bound == Bound::Lower ? ">" : "") + format_number(row.tol);
}

void emit_json_lines(const Report& rep, std::ostream& out) {
  const RunConfig& c = rep.config;
  out << "{\"record\":\"header\",\"mode\":" << quoted(mode_name(c.mode)) << ",\"fd_step\":" << json_number(c.fd_step)
      << ",\"seed\":" << c.seed << ",\"identity_tol\":" << json_number(c.identity_tol)
      << ",\"classify_tol\":" << json_number(c.effective_classify_tol()) << ",\"probes\":" << c.probes
      << ",\"forms\":" << c.forms << ",\"tuples\":" << c.tuples << ",\"contrast_sign\":-1,\"scenarios\":[";
  for (std::size_t i = 0; i < rep.scenarios.size(); ++i) out << (i ? "," : "") << quoted(rep.scenarios[i].name);
  out << "]}\n";
  for (const auto& s : rep.scenarios) {
    out << "{\"record\":\"scenario\",\"name\":" << quoted(s.name) << ",\"verdict\":\"" << verdict(s.pass)
        << "\",\"residuals\":[";
    for (std::size_t i = 0; i < s.residuals.size(); ++i) {
      const auto& r = s.residuals[i];
      out << (i ? "," : "") << "{\"name\":" << quoted(r.name) << ",\"max\":" << json_number(r.stats.max)
          << ",\"mean\":" << json_number(r.stats.mean) << ",\"count\":" << r.stats.count
          << ",\"tol\":" << json_number(r.tol) << ",\"bound\":\""
          << (r.bound == Bound::Upper ? "upper" : "lower") << "\",\"verdict\":\"" << verdict(r.pass) << "\"}";
    }
    out << "],\"classifications\":[";
    for (std::size_t i = 0; i < s.classifications.size(); ++i) {
      const auto& k = s.classifications[i];
      out << (i ? "," : "") << "{\"label\":" << quoted(k.label) << ",\"expected\":" << quoted(k.expected)
          << ",\"actual\":" << quoted(k.actual) << ",\"verdict\":\"" << verdict(k.pass) << "\"}";
    }
    out << "],\"errors\":[";
    for (std::size_t i = 0; i < s.errors.size(); ++i) out << (i ? "," : "") << quoted(s.errors[i]);
    out << "]}\n";
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
  return r + "\"";
}

void emit_csv(const Report& rep, std::ostream& out) {
  out << "scenario,residual_name,max,mean,tol,verdict\n";
  for (const auto& s : rep.scenarios) {
    for (const auto& r : s.residuals)
      out << csv_field(s.name) << ',' << csv_field(r.name) << ',' << format_number(r.stats.max) << ','
          << format_number(r.stats.mean) << ',' << tol_text(r) << ',' << verdict(r.pass) << '\n';
    for (const auto& e : s.errors) out << csv_field(s.name) << ',' << csv_field("error: " + e) << ",,,,FAIL\n";
  }
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

void emit_human(const Report& rep, std::ostream& out) {
  const RunConfig& c = rep.config;
  out << "biform verification report\n"
      << "mode " << mode_name(c.mode) << ", fd_step " << format_number(c.fd_step) << ", seed " << c.seed
      << ", contrast sign -1 (w = -dL dR F)\n"
      << "identity_tol " << format_number(c.identity_tol) << ", classify_tol "
      << format_number(c.effective_classify_tol()) << ", probes " << c.probes << "\n";
  std::size_t passed = 0;
  for (const auto& s : rep.scenarios) {
    passed += s.pass;
    out << "\n== " << s.name << ": " << verdict(s.pass) << "\n";
    if (!s.residuals.empty())
      out << "  " << pad("residual", 40) << pad("max", 20) << pad("mean", 20) << pad("tol", 20) << "verdict\n";
    for (const auto& r : s.residuals)
      out << "  " << pad(r.name, 40) << pad(format_number(r.stats.max), 20) << pad(format_number(r.stats.mean), 20)
          << pad(tol_text(r), 20) << verdict(r.pass) << "\n";
    for (const auto& k : s.classifications)
      out << "  class " << pad(k.label, 34) << pad("expected " + k.expected, 24) << pad("got " + k.actual, 20)
          << verdict(k.pass) << "\n";
    for (const auto& e : s.errors) out << "  error " << e << "\n";
  }
  out << "\n" << passed << "/" << rep.scenarios.size() << " scenarios passed: " << verdict(rep.pass()) << "\n";
}

}  // namespace

ReportFormat parse_format(const std::string& s) {
  if (s == "json-lines") return ReportFormat::JsonLines;
  if (s == "csv") return ReportFormat::Csv;
  if (s == "human") return ReportFormat::Human;
  throw UsageError("unknown format '" + s + "' (json-lines, csv, human)");
}

const char* format_name(ReportFormat f) {
  switch (f) {
    case ReportFormat::JsonLines: return "json-lines";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Human: return "human";
  }
  return "?";
}

DiffContext RunConfig::context() const {
  DiffContext ctx;
  ctx.config.mode = mode;
  ctx.config.fd_step = fd_step;
  return ctx;
}

double RunConfig::effective_classify_tol() const { return classify_tol >= 0 ? classify_tol : classify_tolerance(context()); }

void RunConfig::validate() const {
  if (!(fd_step > 0)) throw UsageError("fd_step must be positive");
  if (!(identity_tol > 0)) throw UsageError("identity tolerance must be positive");
  if (classify_tol == 0) throw UsageError("classify tolerance must be positive");
  if (probes < 1 || forms < 1 || tuples < 1) throw UsageError("probes, forms and tuples must be at least 1");
  for (const auto& s : scenarios)
    if (std::find(kScenarios.begin(), kScenarios.end(), s) == kScenarios.end())
      throw UsageError("unknown scenario '" + s + "'");
}

void apply_config_json(RunConfig& cfg, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "scenarios") cfg.scenarios = v.get<std::vector<std::string>>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "mode") {
        const auto m = v.get<std::string>();
        if (m == "jet") cfg.mode = DiffMode::TaylorJet;
        else if (m == "fd") cfg.mode = DiffMode::CentralDifference;
        else throw UsageError("config: mode must be \"jet\" or \"fd\"");
      } else if (key == "fd_step") cfg.fd_step = v.get<double>();
      else if (key == "tolerances") {
        for (const auto& [tk, tv] : v.items()) {
          if (tk == "identity") cfg.identity_tol = tv.get<double>();
          else if (tk == "classify") cfg.classify_tol = tv.get<double>();
          else throw UsageError("config: unknown key tolerances." + tk);
        }
      } else if (key == "probes") cfg.probes = v.get<int>();
      else if (key == "forms") cfg.forms = v.get<int>();
      else if (key == "tuples") cfg.tuples = v.get<int>();
      else if (key == "output") {
        for (const auto& [ok, ov] : v.items()) {
          if (ok == "path") cfg.out = ov.get<std::string>();
          else if (ok == "format") cfg.format = parse_format(ov.get<std::string>());
          else throw UsageError("config: unknown key output." + ok);
        }
      } else if (key == "parallel") cfg.parallel = v.get<bool>();
      else throw UsageError("config: unknown key " + key);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_json(cfg, ss.str());
}

const std::vector<std::string>& scenario_names() { return kScenarios; }

bool Report::pass() const {
  for (const auto& s : scenarios)
    if (!s.pass) return false;
  return true;
}

ScenarioRecord run_scenario(const std::string& name, const RunConfig& cfg) {
  using Body = void (*)(const RunConfig&, Rng&, Recorder&);
  static const std::vector<std::pair<std::string, Body>> table = {
      {"bicomplex-identities", bicomplex_identities}, {"eguchi-euclidean", eguchi_euclidean},
      {"eguchi-gaussian-kl", eguchi_gaussian_kl},     {"teleparallel-2d", teleparallel_2d},
      {"qubit-vnu-bkm", qubit_vnu_bkm},               {"qubit-monotone-profile", qubit_monotone_profile},
      {"qutrit-smoke", qutrit_smoke}};
  Body body = nullptr;
  for (const auto& [n, b] : table)
    if (n == name) body = b;
  if (!body) throw UsageError("unknown scenario '" + name + "'");

  ScenarioRecord rec;
  rec.name = name;
  Recorder recorder(rec, cfg);
  Rng rng(cfg.seed ^ fnv1a(name));
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(cfg, rng, recorder);
  } catch (const Error& e) {
    rec.errors.push_back(e.what());
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.pass = rec.errors.empty();
  for (const auto& r : rec.residuals) rec.pass = rec.pass && r.pass;
  for (const auto& k : rec.classifications) rec.pass = rec.pass && k.pass;
  return rec;
}

Report run_suite(const RunConfig& cfg) {
  cfg.validate();
  Report rep{cfg, {}};
  for (const auto& name : cfg.scenarios.empty() ? kScenarios : cfg.scenarios)
    rep.scenarios.push_back(run_scenario(name, cfg));
  return rep;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 11);
  return std::string(buf, end);
}

void emit_report(const Report& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::JsonLines: emit_json_lines(report, out); break;
    case ReportFormat::Csv: emit_csv(report, out); break;
    case ReportFormat::Human: emit_human(report, out); break;
  }
}

void emit_report(const Report& report, ReportFormat format, const std::string& path) {
  if (path == "-") {
    emit_report(report, format, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report to " + path);
  emit_report(report, format, out);
  out.flush();
  if (!out) throw IoError("error writing report to " + path);
}

int exit_code(const Report& report) { return report.pass() ? 0 : 1; }

}  // namespace biform
