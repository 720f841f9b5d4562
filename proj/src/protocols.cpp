#include "wvsim/protocols.hpp"

#include <cmath>

namespace wvsim {

namespace {

struct XYZ {
  double x, y, z;
};

XYZ quadratic_forms(const PureState& p) {
  // <p|X|p>, <p|Y|p>, <p|Z|p> without normalizing.
  cx a = p[0], b = p[1];
  double x = 2.0 * std::real(std::conj(a) * b);
  double y = 2.0 * std::imag(std::conj(a) * b);
  double z = std::norm(a) - std::norm(b);
  return {x, y, z};
}

PointerStats invalid_stats() {
  PointerStats st;
  st.valid = false;
  st.p_postselect = 0.0;
  st.system_fidelity = 1.0;
  st.outcome_probs = {{"plus_post", 0.0}, {"minus_post", 0.0}, {"fail", 1.0}};
  return st;
}

// Shared path for the X-basis regimes: evolve psi_i (x) pointer by the gate,
// post-select the system on psi_f, read the pointer.
PointerStats run_conditional(const PrePostSelection& sel, const PureState& pointer,
                             const Operator& gate, bool normalize_pointer) {
  PureState joint = tensor(sel.psi_i(), pointer);
  PureState evolved = apply(gate, joint);
  auto [residual, p] = project(evolved, sel.psi_f, Subsystem::System);

  PointerStats st;
  st.p_postselect = p;
  st.system_fidelity = fidelity(sel.psi_i(), partial_trace_system(evolved));
  if (residual.is_null()) {
    PointerStats bad = invalid_stats();
    bad.system_fidelity = st.system_fidelity;
    return bad;
  }

  double p_plus = std::norm(inner(ket_plus(), residual));
  double p_minus = std::norm(inner(ket_minus(), residual));
  st.outcome_probs = {{"plus_post", p_plus},
                      {"minus_post", p_minus},
                      {"fail", 1.0 - p}};

  PureState read = normalize_pointer
                       ? residual.normalized()
                       : residual.scaled(1.0 / inner(sel.psi_f, sel.psi_i()));
  XYZ e = quadratic_forms(read);
  st.exp_x = e.x;
  st.exp_y = e.y;
  st.exp_z = e.z;
  return st;
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::WeakInteraction:
      return "weak";
    case Regime::InsensitivePointer:
      return "insensitive";
    case Regime::Erasure:
      return "erasure";
  }
  return "?";
}

PointerStats run_weak_regime(const PrePostSelection& sel, double phi) {
  return run_conditional(sel, ket_plus(), cphase(phi), true);
}

PointerStats run_insensitive_regime(const PrePostSelection& sel, double delta) {
  if (std::abs(delta) >= 1.0)
    throw std::invalid_argument("pointer deviation must lie in (-1, 1)");
  // alpha - beta = delta, alpha + beta = sqrt(2 - delta^2): in the Z basis the
  // pointer reads (sqrt(1 - delta^2/2), delta/sqrt(2)).
  double a0 = std::sqrt(1.0 - 0.5 * delta * delta);
  double a1 = delta / std::sqrt(2.0);
  PureState pointer({cx{a0, 0.0}, cx{a1, 0.0}});
  return run_conditional(sel, pointer, cphase(M_PI), true);
}

PointerStats run_strong_pointer_regime(const PrePostSelection& sel) {
  return run_conditional(sel, ket_plus(), cphase(M_PI), false);
}

PointerStats run_erasure_regime(const PrePostSelection& sel, double delta,
                                FeedforwardMode feedforward) {
  if (std::abs(delta) >= 1.0)
    throw std::invalid_argument("erasure deviation must lie in (-1, 1)");
  double ge = std::sqrt(1.0 - delta * delta);
  PureState erase({cx{ge, 0.0}, cx{delta, 0.0}});
  PureState erase_perp({cx{delta, 0.0}, cx{-ge, 0.0}});

  PureState evolved = apply(cphase(M_PI), tensor(sel.psi_i(), ket_plus()));
  auto [sys1, pb1] = project(evolved, erase, Subsystem::Pointer);
  auto [sys2_raw, pb2] = project(evolved, erase_perp, Subsystem::Pointer);

  PureState sys2 = sys2_raw;
  if (feedforward == FeedforwardMode::TrueOperator && !sys2_raw.is_null())
    sys2 = apply(pauli_z(), sys2_raw);

  double p1 = sys1.is_null() ? 0.0 : std::norm(inner(sel.psi_f, sys1));
  double p2 = 0.0;
  if (!sys2_raw.is_null()) {
    if (feedforward == FeedforwardMode::SimulatedProjection)
      p2 = std::norm(inner(ket_minus(), sys2_raw));
    else
      p2 = std::norm(inner(sel.psi_f, sys2));
  }

  PointerStats st;
  st.outcome_probs = {{"erase_post", p1},
                      {"perp_post", p2},
                      {"erase_fail", pb1 - p1},
                      {"perp_fail", pb2 - p2}};
  st.p_postselect = p1 + p2;
  if (st.p_postselect < kDivergenceTol) {
    st.valid = false;
  } else {
    st.exp_z = (p1 - p2) / (p1 + p2);
  }

  double f = 0.0;
  if (!sys1.is_null()) f += std::norm(inner(sel.psi_i(), sys1.normalized())) * pb1;
  if (!sys2.is_null()) f += std::norm(inner(sel.psi_i(), sys2.normalized())) * pb2;
  st.system_fidelity = f;
  return st;
}

WeakValueEstimate estimate_weak_value(const PointerStats& stats,
                                      const RegimeConfig& config,
                                      double effective_coupling) {
  if (!stats.valid) throw InvalidStats("pointer statistics flagged invalid");
  if (effective_coupling <= 0.0)
    throw std::invalid_argument("effective coupling must be positive");

  WeakValueEstimate est;
  est.method = config.regime;
  est.effective_coupling = effective_coupling;

  switch (config.regime) {
    case Regime::WeakInteraction: {
      if (stats.exp_x > 1.0 + 1e-9 && stats.shots == 0)
        throw NonInvertible("exact exp_x above 1 cannot be inverted");
      // Statistical fluctuation above 1 clamps to 0.
      double def = std::max(1.0 - stats.exp_x, 0.0);
      est.value = cx{std::sqrt(def) / effective_coupling, 0.0};
      double floor = std::max(def, std::max(stats.se_x, 1e-12));
      est.stderr_value =
          stats.se_x / (2.0 * effective_coupling * std::sqrt(floor));
      break;
    }
    case Regime::InsensitivePointer: {
      cx abar{stats.exp_x / effective_coupling, 0.0};
      est.value = convert_abar_to_a(abar);
      est.stderr_value = stats.se_x / (2.0 * effective_coupling);
      break;
    }
    case Regime::Erasure: {
      cx abar{stats.exp_z / (4.0 * effective_coupling), 0.0};
      est.value = convert_abar_to_a(abar);
      est.stderr_value = stats.se_z / (8.0 * effective_coupling);
      break;
    }
  }
  return est;
}

}  // namespace wvsim
