// biform_cli: run verification scenarios and write a report.
//
// Exit codes: 0 all PASS, 1 some FAIL, 2 usage error, 3 I/O error.

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "biform/runner.hpp"

using namespace biform;

int main(int argc, char** argv) {
  CLI::App app{"Bi-form calculus verification runner"};
  std::string config_path;
  std::vector<std::string> scenarios;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode, out, format;
  std::optional<double> fd_step, tol_identity, tol_classify;
  std::optional<int> probes;
  bool parallel = false, list = false;

  app.add_option("--config", config_path, "JSON run configuration; flags override its values");
  app.add_option("--scenario", scenarios, "Scenario to run (repeatable; default: all)");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--mode", mode, "Derivative mode")->check(CLI::IsMember({"jet", "fd"}));
  app.add_option("--fd-step", fd_step, "Central-difference step");
  app.add_option("--tol-identity", tol_identity, "Tolerance for the bi-complex identities");
  app.add_option("--tol-classify", tol_classify, "Zero threshold for torsion classification");
  app.add_option("--probes", probes, "Probe points per check");
  app.add_option("--out", out, "Report path, - for stdout");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json-lines", "csv", "human"}));
  app.add_flag("--parallel", parallel, "Run probe sweeps with OpenMP");
  app.add_flag("--list", list, "List scenario names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& s : scenario_names()) std::cout << s << "\n";
    return 0;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (!scenarios.empty()) cfg.scenarios = scenarios;
    if (seed) cfg.seed = *seed;
    if (mode) cfg.mode = *mode == "jet" ? DiffMode::TaylorJet : DiffMode::CentralDifference;
    if (fd_step) cfg.fd_step = *fd_step;
    if (tol_identity) cfg.identity_tol = *tol_identity;
    if (tol_classify) cfg.classify_tol = *tol_classify;
    if (probes) cfg.probes = *probes;
    if (out) cfg.out = *out;
    if (format) cfg.format = parse_format(*format);
    if (parallel) cfg.parallel = true;
    cfg.validate();
  } catch (const IoError& e) {
    std::cerr << "biform_cli: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "biform_cli: " << e.what() << "\n";
    return 2;
  }

  const Report report = run_suite(cfg);
  for (const auto& s : report.scenarios)
    std::cerr << s.name << ": " << (s.pass ? "PASS" : "FAIL") << " (" << s.wall_seconds << " s)\n";
  try {
    emit_report(report, cfg.format, cfg.out);
  } catch (const IoError& e) {
    std::cerr << "biform_cli: " << e.what() << "\n";
    return 3;
  }
  return exit_code(report);
}
