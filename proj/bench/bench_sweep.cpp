// Serial vs OpenMP probe sweeps on the heavier residuals.
//
//   bench_sweep [points] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "biform/corpus.hpp"
#include "biform/quantum.hpp"

using namespace biform;

namespace {

struct Timing {
  double seconds;
  SweepStats stats;
};

template <class Fn>
Timing best_of(int repeats, Fn&& fn) {
  Timing best{1e300, {}};
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepStats s = fn();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt < best.seconds) best = {dt, s};
  }
  return best;
}

void row(const char* name, int repeats, const std::function<SweepStats(Execution)>& run) {
  const Timing s = best_of(repeats, [&] { return run(Execution::Serial); });
  const Timing p = best_of(repeats, [&] { return run(Execution::Parallel); });
  const bool same = s.stats.max == p.stats.max && s.stats.mean == p.stats.mean;
  std::printf("%-28s %10.4f %10.4f %8.2fx  %s\n", name, s.seconds, p.seconds, s.seconds / p.seconds,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 200;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  std::printf("threads %d, points %d, best of %d\n", thread_count(), n, repeats);
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial[s]", "omp[s]", "speedup");

  Rng rng(1);
  const ChartPtr gauss = gaussian_chart();
  const auto gpts = gauss->sample(rng, n);
  ProbeOptions opt;
  opt.points = gpts;
  const ContrastBiForm kl = biform_from_contrast(gaussian_kl(gauss), opt);
  const MetricField g = induced_metric(kl);
  const Connection nabla = induced_connection(kl);
  const Connection dual = dual_structure(kl).connection;
  row("gaussian-kl conjugacy", repeats,
      [&](Execution e) { return conjugacy_residual(g, nabla, dual, gpts, {}, e); });

  const QuantumStateModel sld = build_state_model(2, "SLD");
  const auto qpts = sld.chart()->sample(rng, n);
  opt.points = qpts;
  const ContrastBiForm w = quantum_canonical_biform(sld, opt);
  const Connection qdual = dual_structure(w).connection;
  row("qubit SLD dual torsion", repeats, [&](Execution e) { return torsion_residual(qdual, qpts, {}, e); });

  const QuantumStateModel bkm3 = build_state_model(3, "BKM");
  const auto tpts = bkm3.chart()->sample(rng, n / 4);
  const MetricField g3 = bkm3.metric();
  row("qutrit BKM metric", repeats,
      [&](Execution e) { return component_residual(g3, tpts, {}, e); });
  return 0;
}
