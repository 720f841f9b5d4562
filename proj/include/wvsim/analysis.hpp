#pragma once

// Gamma sweeps across regimes, effective-coupling least-squares fitting
// against the analytic curve, and regime-comparison reports. Sweep points
// are independent and run in parallel (OpenMP) with per-point derived seeds;
// a serial reference path is kept for testing and benchmarking.

#include <cstdint>
#include <utility>
#include <vector>

#include "wvsim/montecarlo.hpp"
#include "wvsim/protocols.hpp"

namespace wvsim {

struct SweepPoint {
  double gamma = 0.0;
  double exact_aw = 0.0;      // analytic curve value
  double estimated_aw = 0.0;  // inverted with the fitted coupling
  double stderr_aw = 0.0;     // 0 in exact mode
  double raw_stat = 0.0;      // regime's measured expectation (exp_x or exp_z)
  double raw_se = 0.0;
  double p_postselect = 0.0;
  double system_fidelity = 1.0;
  bool valid = true;
};

struct SweepResult {
  Regime regime = Regime::WeakInteraction;
  std::vector<SweepPoint> points;
  double nominal_coupling = 0.0;
  double fitted_coupling = 0.0;
  double fit_residual = 0.0;  // rms deviation from the curve at the fit
  long shots = 0;
  std::uint64_t master_seed = 0;
};

struct ComparisonReport {
  SweepResult weak;
  SweepResult insensitive;
  SweepResult erasure;
  double max_pairwise_delta = 0.0;  // over shared valid points
  double consistent_fraction = 0.0;
  bool consistent = false;
};

// Inversion of a raw pointer reading into an A_w estimate at a given
// coupling (same formulas as estimate_weak_value, fluctuations clamped).
double invert_raw(Regime regime, double raw_stat, double coupling);

// Unweighted least squares over coupling > 0 via golden-section search on
// [1e-4, 2], relative bracket tolerance 1e-10. Throws FitFailure with fewer
// than 3 points or a non-finite objective.
std::pair<double, double> fit_effective_coupling(
    const std::vector<std::pair<double, double>>& points, Regime regime);

// Runs the regime at each grid point (exact when shots == 0, multinomial
// sampling otherwise), fits the effective coupling on points with
// post-selection probability >= 1e-4, then inverts every point with the fit.
SweepResult sweep(const RegimeConfig& config, const std::vector<double>& gamma_grid,
                  long shots = 0, std::uint64_t master_seed = 0,
                  bool parallel = true);

inline SweepResult sweep_serial(const RegimeConfig& config,
                                const std::vector<double>& gamma_grid,
                                long shots = 0, std::uint64_t master_seed = 0) {
  return sweep(config, gamma_grid, shots, master_seed, false);
}

// Three sweeps on a common grid. Pairwise estimates are consistent at a
// point when they agree within 3 combined standard errors (absolute floor
// 0.02 in exact mode); the report flags consistency at >= 95% of points.
ComparisonReport compare_regimes(const std::vector<double>& gamma_grid,
                                 double coupling_weak, double coupling_insensitive,
                                 double coupling_erasure, long shots = 0,
                                 std::uint64_t master_seed = 0,
                                 FeedforwardMode feedforward = FeedforwardMode::TrueOperator);

std::vector<double> linspace(double start, double stop, int n);

}  // namespace wvsim
