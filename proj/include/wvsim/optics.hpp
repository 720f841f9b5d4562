#pragma once

// Component-level polarization model of the tunable controlled-phase gate:
// beam displacers, wave plates, the partially polarizing beam splitter with
// its two-photon coincidence rule, and balancing attenuators.
//
// Joint amplitudes are ordered pointer-polarization first:
// index = 2*(pointer V?) + (signal V?). The first beam displacer routes the
// vertically polarized pointer into the upper interferometer arm with its
// polarization standardized to horizontal; the lower arm carries the
// horizontal (non-interacting) pointer. The second displacer recombines the
// arms (phase-calibrated, upper arm circular by construction) and the final
// half-wave plate restores the logical encoding.

#include <array>
#include <string>
#include <vector>

#include "wvsim/qcore.hpp"

namespace wvsim {
namespace optics {

using Mat2 = std::array<cx, 4>;  // row-major 2x2 Jones matrix

enum class ElementKind {
  HalfWave,
  QuarterWave,
  Polarizer,
  Attenuator,
  BeamSplit,   // first displacer: route pointer V -> upper arm
  BeamMerge,   // second displacer: recombine arms
  Ppbs,
};

enum class Placement { PointerUpperArm, PointerLowerArm, SignalPath, Merged };

struct JonesElement {
  ElementKind kind;
  double parameter;  // wave-plate angle (rad) or attenuator amplitude
  Mat2 matrix;       // derived Jones matrix (wave plates, polarizer)
};

// Standard Jones matrices; convention: HWP(pi/8) maps |H> to (|H>+|V>)/sqrt2,
// HWP(pi/4) swaps |H> and |V>, QWP(0) maps |+> to |R>.
JonesElement hwp(double theta);
JonesElement qwp(double theta);
JonesElement polarizer(double theta);
JonesElement attenuator(double amplitude);

struct TwoPhotonAmplitudes {
  // `merged` holds the joint state before the first displacer and after the
  // second one; between them the pointer-H sector stays in `merged` (lower
  // arm) and `upper` holds the displaced sector.
  std::array<cx, 4> merged{};
  std::array<cx, 4> upper{};
  bool split = false;

  static TwoPhotonAmplitudes basis(int pointer_bit, int signal_bit);
  double norm2() const;
  double success_amplitude() const;  // sqrt(norm2)
};

struct ChainElement {
  std::string name;
  ElementKind kind;
  Placement place;
  double parameter;
  Mat2 matrix;
};

struct OpticalChain {
  std::vector<ChainElement> elements;
  double phi = 0.0;
  bool balanced = true;
};

// Canonical chain BD -> HWP2 -> PPBS -> QWP1 -> HWP3 -> BD -> HWP6 with the
// phase plate at phi/4 and, when balancing is on, a 1/sqrt(3) attenuator on
// the signal-H amplitude and a 1/sqrt(2) attenuator in the lower pointer arm.
OpticalChain build_chain(double phi, bool balanced = true);

// Coincidence-post-selected PPBS action: H transmits fully, V with amplitude
// 1/sqrt(3), and the two-photon VV amplitude takes the interference value
// t^2 - r^2 = -1/3.
TwoPhotonAmplitudes ppbs_coincidence(const TwoPhotonAmplitudes& in);

TwoPhotonAmplitudes apply_element(const ChainElement& el,
                                  const TwoPhotonAmplitudes& in);

// State after every element, for row-by-row comparison with the component
// table (states compared up to global phase and success amplitude).
std::vector<TwoPhotonAmplitudes> evaluate_chain(const OpticalChain& chain,
                                                const TwoPhotonAmplitudes& in);

struct EffectiveGate {
  Operator gate;  // dim 4, pointer index first
  double success_probability;
  std::array<double, 4> basis_amplitudes;  // per computational basis input
};

// Assembles the 4x4 map from the chain's action on basis states. With
// balancing on, gate = (uniform amplitude) * diag(1, e^{-i phi/2})_pointer *
// cphase(phi); throws ChainUnbalanced if the basis amplitudes disagree.
EffectiveGate effective_gate(const OpticalChain& chain);

std::string describe_chain(const OpticalChain& chain);

}  // namespace optics
}  // namespace wvsim
