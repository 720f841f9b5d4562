#pragma once

// Weak-value definitions, the tunable controlled-phase gate and its
// Hamiltonian split, the analytic weak-value curve in gamma, and the
// contracted two-level interaction operator.

#include <complex>

#include "wvsim/qcore.hpp"

namespace wvsim {

// Pre-selection cos(gamma)|0> + sin(gamma)|1>, post-selection psi_f
// (default (|0>+|1>)/sqrt(2)).
struct PrePostSelection {
  double gamma = 0.0;
  PureState psi_f = ket_plus();

  PureState psi_i() const;
  // |<psi_f|psi_i>|^2
  double overlap_prob() const;
};

enum class CouplingMeaning { PhaseShiftPhi, PointerDelta, WeakG };

struct CouplingConstant {
  double value = 0.0;
  CouplingMeaning meaning = CouplingMeaning::PhaseShiftPhi;
};

constexpr double kDivergenceTol = 1e-12;

// <psi_f|A|psi_i> / <psi_f|psi_i>. May lie outside the eigenvalue range.
// Throws DivergentPostSelection when the post-selection overlap vanishes.
cx weak_value(const Operator& a, const PrePostSelection& sel);

// Analytic weak value of (I-Z)/2 between the standard pre/post-selections,
// 1/(cot(gamma)+1); gamma = 0 gives the limit value 0.
double theory_curve(double gamma);

// A_w = (1 - Abar_w)/2.
cx convert_abar_to_a(cx abar_w);

// Measured-system observable whose weak value the gate estimates.
Operator measured_observable();  // (I - Z)/2

// diag(1, 1, 1, e^{i phi}).
Operator cphase(double phi);

struct CphaseHamiltonian {
  Operator h;   // full generator
  Operator h1;  // interaction part
  Operator h0;  // pointer-local part, commutes with I (x) Z
};

// Dimensionless generator of cphase(phi): exp_hermitian(h, 1) == cphase(phi).
// The sign is oriented so the canonical e^{+i phi} convention comes out of
// the e^{-iH} exponential; h = h1 + h0 exactly.
CphaseHamiltonian hamiltonian_cphase(double phi);

// Pointer-space operator obtained by contracting the strong interaction
// |a0><a0| (x) I + |a1><a1| (x) Z between psi_f and psi_i, divided by
// <psi_f|psi_i>. Satisfies 2B = (1+Abar_w) I + (1-Abar_w) Z.
Operator b_operator(const PrePostSelection& sel, const PureState& a0,
                    const PureState& a1);

}  // namespace wvsim
