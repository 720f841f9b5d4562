#pragma once

// Exact (infinite-statistics) execution of the three estimation regimes:
// preparation, interaction, post-selection, pointer observables,
// feed-forward and inversion of pointer statistics into weak-value
// estimates.

#include <map>
#include <string>

#include "wvsim/weakval.hpp"

namespace wvsim {

enum class Regime { WeakInteraction, InsensitivePointer, Erasure };

enum class FeedforwardMode { TrueOperator, SimulatedProjection, Off };

struct RegimeConfig {
  Regime regime = Regime::WeakInteraction;
  PrePostSelection sel;
  CouplingConstant coupling;
  FeedforwardMode feedforward = FeedforwardMode::TrueOperator;  // Erasure only
};

const char* regime_name(Regime r);

// Exact post-selection probability, conditional pointer expectations and the
// system-disturbance fidelity of one regime run. Outcome probabilities cover
// the full joint distribution (they sum to 1) so finite statistics can be
// sampled from them directly. Standard errors are zero for exact runs and
// filled in by the Monte Carlo layer.
struct PointerStats {
  double p_postselect = 0.0;
  double exp_x = 0.0;
  double exp_y = 0.0;
  double exp_z = 0.0;
  double system_fidelity = 1.0;
  std::map<std::string, double> outcome_probs;
  bool valid = true;
  double se_x = 0.0;
  double se_z = 0.0;
  long shots = 0;  // 0 = exact
};

struct WeakValueEstimate {
  cx value{0.0, 0.0};
  Regime method = Regime::WeakInteraction;
  double effective_coupling = 0.0;
  bool valid = true;
  double stderr_value = 0.0;
};

// Weak interaction: cphase(phi) on psi_i (x) |+>, post-selected on psi_f.
// Pointer expectations are conditional on post-selection; system_fidelity is
// taken from the unpost-selected reduced system state.
PointerStats run_weak_regime(const PrePostSelection& sel, double phi);

// Strong interaction cphase(pi) with a pointer deviated from |0> by delta
// (alpha - beta = delta, alpha + beta = sqrt(2 - delta^2)).
PointerStats run_insensitive_regime(const PrePostSelection& sel, double delta);

// Strong interaction with pointer |+>. Expectations are the quadratic forms
// of the contracted (unnormalized) pointer B|phi>, which is what the
// strong-measurement limit formulas describe:
//   exp_z = (1 - |Abar_w|^2)/2,  exp_x = Re Abar_w.
PointerStats run_strong_pointer_regime(const PrePostSelection& sel);

// Strong interaction cphase(pi), pointer |+>, erasure basis
// |e> = sqrt(1-delta^2)|0> + delta|1>, |e_perp> = delta|0> - sqrt(1-delta^2)|1>,
// with feed-forward on the orthogonal outcome. exp_z is the conditional
// asymmetry (p_e - p_perp)/(p_e + p_perp) over post-selected events.
PointerStats run_erasure_regime(const PrePostSelection& sel, double delta,
                                FeedforwardMode feedforward);

// Inverts the regime's pointer reading with a supplied effective coupling:
//   WeakInteraction:     |A_w| = sqrt(1 - exp_x) / g_eff   (positive root)
//   InsensitivePointer:  Abar_w = exp_x / delta_eff, then (1-Abar)/2
//   Erasure:             Abar_w = exp_z / (4 delta_eff), then (1-Abar)/2
// Throws InvalidStats on invalid input and NonInvertible when exp_x > 1 in
// the weak regime.
WeakValueEstimate estimate_weak_value(const PointerStats& stats,
                                      const RegimeConfig& config,
                                      double effective_coupling);

}  // namespace wvsim
