// Benchmark: sampled sweeps with the parallel kernel against the serial
// reference. Usage: bench_sweep [points] [shots] [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "wvsim/analysis.hpp"

using namespace wvsim;

namespace {

double time_sweep(const RegimeConfig& cfg, const std::vector<double>& grid,
                  long shots, int repeats, bool parallel, double* sink) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    SweepResult sr = sweep(cfg, grid, shots, 12345, parallel);
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    *sink += sr.fitted_coupling;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int points = argc > 1 ? std::atoi(argv[1]) : 400;
  long shots = argc > 2 ? std::atol(argv[2]) : 20000;
  int repeats = argc > 3 ? std::atoi(argv[3]) : 3;
  if (points < 3 || shots < 0 || repeats < 1) {
    std::fprintf(stderr, "usage: bench_sweep [points>=3] [shots>=0] [repeats>=1]\n");
    return 2;
  }

  std::vector<double> grid = linspace(0.01, 0.68 * M_PI, points);
  RegimeConfig cfgs[3] = {
      {Regime::WeakInteraction, {}, {0.18 * M_PI, CouplingMeaning::PhaseShiftPhi},
       FeedforwardMode::Off},
      {Regime::InsensitivePointer, {}, {0.21, CouplingMeaning::PointerDelta},
       FeedforwardMode::Off},
      {Regime::Erasure, {}, {0.08, CouplingMeaning::PointerDelta},
       FeedforwardMode::TrueOperator},
  };

  std::printf("sweep benchmark: %d points, %ld shots, best of %d\n", points,
              shots, repeats);
  std::printf("%-12s %12s %12s %9s\n", "regime", "serial [s]", "parallel [s]",
              "speedup");
  double sink = 0.0;
  for (const RegimeConfig& cfg : cfgs) {
    double ts = time_sweep(cfg, grid, shots, repeats, false, &sink);
    double tp = time_sweep(cfg, grid, shots, repeats, true, &sink);
    std::printf("%-12s %12.4f %12.4f %8.2fx\n", regime_name(cfg.regime), ts, tp,
                ts / tp);

    SweepResult par = sweep(cfg, grid, shots, 777, true);
    SweepResult ser = sweep_serial(cfg, grid, shots, 777);
    for (size_t i = 0; i < grid.size(); ++i)
      if (par.points[i].raw_stat != ser.points[i].raw_stat ||
          par.points[i].estimated_aw != ser.points[i].estimated_aw) {
        std::fprintf(stderr, "mismatch between serial and parallel results\n");
        return 1;
      }
  }
  if (sink == 0.12345) std::printf("\n");  // keep the timed work observable
  return 0;
}
