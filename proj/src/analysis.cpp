#include "wvsim/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace wvsim {

namespace {

constexpr double kFitProbabilityFloor = 1e-4;

PointerStats run_exact(const RegimeConfig& config, double gamma) {
  PrePostSelection sel = config.sel;
  sel.gamma = gamma;
  switch (config.regime) {
    case Regime::WeakInteraction:
      return run_weak_regime(sel, config.coupling.value);
    case Regime::InsensitivePointer:
      return run_insensitive_regime(sel, config.coupling.value);
    case Regime::Erasure:
      return run_erasure_regime(sel, config.coupling.value, config.feedforward);
  }
  return {};
}

double raw_stat_of(Regime regime, const PointerStats& st) {
  return regime == Regime::Erasure ? st.exp_z : st.exp_x;
}

double raw_se_of(Regime regime, const PointerStats& st) {
  return regime == Regime::Erasure ? st.se_z : st.se_x;
}

double golden_section(const std::vector<std::pair<double, double>>& pts,
                      Regime regime, double lo, double hi, double* value_out) {
  auto objective = [&](double c) {
    double acc = 0.0;
    for (const auto& [gamma, raw] : pts) {
      double d = invert_raw(regime, raw, c) - theory_curve(gamma);
      acc += d * d;
    }
    return acc;
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  if (!std::isfinite(f1) || !std::isfinite(f2))
    throw FitFailure("non-finite fit objective");
  while ((b - a) > 1e-10 * (std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = objective(x2);
    }
  }
  double c = 0.5 * (a + b);
  if (value_out) *value_out = objective(c);
  return c;
}

}  // namespace

double invert_raw(Regime regime, double raw_stat, double coupling) {
  switch (regime) {
    case Regime::WeakInteraction:
      return std::sqrt(std::max(1.0 - raw_stat, 0.0)) / coupling;
    case Regime::InsensitivePointer:
      return 0.5 * (1.0 - raw_stat / coupling);
    case Regime::Erasure:
      return 0.5 * (1.0 - raw_stat / (4.0 * coupling));
  }
  return 0.0;
}

std::pair<double, double> fit_effective_coupling(
    const std::vector<std::pair<double, double>>& points, Regime regime) {
  if (points.size() < 3)
    throw FitFailure("effective-coupling fit needs at least 3 valid points");
  double obj = 0.0;
  double c = golden_section(points, regime, 1e-4, 2.0, &obj);
  if (!std::isfinite(c) || !std::isfinite(obj))
    throw FitFailure("effective-coupling fit did not converge");
  return {c, std::sqrt(obj / static_cast<double>(points.size()))};
}

SweepResult sweep(const RegimeConfig& config, const std::vector<double>& gamma_grid,
                  long shots, std::uint64_t master_seed, bool parallel) {
  SweepResult result;
  result.regime = config.regime;
  result.nominal_coupling = config.coupling.value;
  result.shots = shots;
  result.master_seed = master_seed;
  result.points.resize(gamma_grid.size());

  if (config.regime != Regime::WeakInteraction &&
      std::abs(config.coupling.value) >= 1.0)
    throw std::invalid_argument("pointer deviation must lie in (-1, 1)");

  const auto n = static_cast<std::int64_t>(gamma_grid.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    const double gamma = gamma_grid[static_cast<size_t>(i)];
    SweepPoint pt;
    pt.gamma = gamma;
    PointerStats exact = run_exact(config, gamma);
    pt.system_fidelity = exact.system_fidelity;
    PointerStats measured = exact;
    if (exact.valid && shots > 0) {
      MeasurementRecord rec = sample_record(
          exact.outcome_probs, shots,
          derive_seed(master_seed, static_cast<std::uint64_t>(i)));
      measured = empirical_stats(rec);
      measured.system_fidelity = exact.system_fidelity;
    }
    pt.valid = measured.valid;
    pt.p_postselect = measured.p_postselect;
    pt.raw_stat = measured.valid ? raw_stat_of(config.regime, measured) : 0.0;
    pt.raw_se = raw_se_of(config.regime, measured);
    try {
      pt.exact_aw = theory_curve(gamma);
    } catch (const DivergentPostSelection&) {
      pt.valid = false;
    }
    result.points[static_cast<size_t>(i)] = pt;
  }

  std::vector<std::pair<double, double>> fit_pts;
  for (const SweepPoint& pt : result.points)
    if (pt.valid && pt.p_postselect >= kFitProbabilityFloor)
      fit_pts.push_back({pt.gamma, pt.raw_stat});
  auto [coupling, residual] = fit_effective_coupling(fit_pts, config.regime);
  result.fitted_coupling = coupling;
  result.fit_residual = residual;

  for (SweepPoint& pt : result.points) {
    if (!pt.valid) continue;
    PointerStats st;
    st.valid = true;
    st.shots = shots;
    st.p_postselect = pt.p_postselect;
    if (config.regime == Regime::Erasure) {
      st.exp_z = pt.raw_stat;
      st.se_z = pt.raw_se;
    } else {
      st.exp_x = pt.raw_stat;
      st.se_x = pt.raw_se;
    }
    WeakValueEstimate est = estimate_weak_value(st, config, coupling);
    pt.estimated_aw = std::real(est.value);
    pt.stderr_aw = est.stderr_value;
  }
  return result;
}

ComparisonReport compare_regimes(const std::vector<double>& gamma_grid,
                                 double coupling_weak, double coupling_insensitive,
                                 double coupling_erasure, long shots,
                                 std::uint64_t master_seed,
                                 FeedforwardMode feedforward) {
  RegimeConfig cw{Regime::WeakInteraction, {}, {coupling_weak, CouplingMeaning::PhaseShiftPhi},
                  FeedforwardMode::Off};
  RegimeConfig ci{Regime::InsensitivePointer, {}, {coupling_insensitive, CouplingMeaning::PointerDelta},
                  FeedforwardMode::Off};
  RegimeConfig ce{Regime::Erasure, {}, {coupling_erasure, CouplingMeaning::PointerDelta},
                  feedforward};

  ComparisonReport rep;
  rep.weak = sweep(cw, gamma_grid, shots, derive_seed(master_seed, 101));
  rep.insensitive = sweep(ci, gamma_grid, shots, derive_seed(master_seed, 102));
  rep.erasure = sweep(ce, gamma_grid, shots, derive_seed(master_seed, 103));

  const SweepResult* sweeps[3] = {&rep.weak, &rep.insensitive, &rep.erasure};
  long pairs = 0, within = 0;
  for (size_t i = 0; i < gamma_grid.size(); ++i) {
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const SweepPoint& pa = sweeps[a]->points[i];
        const SweepPoint& pb = sweeps[b]->points[i];
        if (!pa.valid || !pb.valid) continue;
        ++pairs;
        double delta = std::abs(pa.estimated_aw - pb.estimated_aw);
        rep.max_pairwise_delta = std::max(rep.max_pairwise_delta, delta);
        double tol = 3.0 * std::hypot(pa.stderr_aw, pb.stderr_aw);
        if (shots == 0) tol = std::max(tol, 0.02);
        if (delta <= tol) ++within;
      }
  }
  rep.consistent_fraction =
      pairs == 0 ? 0.0 : static_cast<double>(within) / static_cast<double>(pairs);
  rep.consistent = pairs > 0 && rep.consistent_fraction >= 0.95;
  return rep;
}

std::vector<double> linspace(double start, double stop, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) {
    out.push_back(start);
    return out;
  }
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(start + (stop - start) * static_cast<double>(i) /
                              static_cast<double>(n - 1));
  return out;
}

}  // namespace wvsim
