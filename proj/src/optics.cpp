#include "wvsim/optics.hpp"

#include <cmath>
#include <sstream>

namespace wvsim {
namespace optics {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

std::array<cx, 4> apply_pointer(const Mat2& j, const std::array<cx, 4>& a) {
  std::array<cx, 4> out{};
  for (int s = 0; s < 2; ++s)
    for (int pp = 0; pp < 2; ++pp)
      for (int p = 0; p < 2; ++p)
        out[static_cast<size_t>(2 * pp + s)] +=
            j[static_cast<size_t>(2 * pp + p)] * a[static_cast<size_t>(2 * p + s)];
  return out;
}

std::array<cx, 4> apply_signal(const Mat2& j, const std::array<cx, 4>& a) {
  std::array<cx, 4> out{};
  for (int p = 0; p < 2; ++p)
    for (int ss = 0; ss < 2; ++ss)
      for (int s = 0; s < 2; ++s)
        out[static_cast<size_t>(2 * p + ss)] +=
            j[static_cast<size_t>(2 * ss + s)] * a[static_cast<size_t>(2 * p + s)];
  return out;
}

void ppbs_sector(std::array<cx, 4>& a, bool pointer_meets_ppbs) {
  if (pointer_meets_ppbs) {
    a[1] *= kInvSqrt3;      // vertical signal
    a[2] *= kInvSqrt3;      // vertical pointer
    a[3] *= -1.0 / 3.0;     // both vertical bunch: t^2 - r^2
  } else {
    // only the signal crosses the splitter
    a[1] *= kInvSqrt3;
    a[3] *= kInvSqrt3;
  }
}

}  // namespace

JonesElement hwp(double theta) {
  double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
  return {ElementKind::HalfWave, theta,
          {cx{c, 0}, cx{s, 0}, cx{s, 0}, cx{-c, 0}}};
}

JonesElement qwp(double theta) {
  // R(theta) diag(1, -i) R(-theta)
  double c = std::cos(theta), s = std::sin(theta);
  cx m00 = cx{c * c, 0} + cx{0, -1} * (s * s);
  cx m01 = cx{c * s, 0} - cx{0, -1} * (c * s);
  cx m11 = cx{s * s, 0} + cx{0, -1} * (c * c);
  return {ElementKind::QuarterWave, theta, {m00, m01, m01, m11}};
}

JonesElement polarizer(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  return {ElementKind::Polarizer, theta,
          {cx{c * c, 0}, cx{c * s, 0}, cx{c * s, 0}, cx{s * s, 0}}};
}

JonesElement attenuator(double amplitude) {
  if (amplitude <= 0.0 || amplitude > 1.0)
    throw std::invalid_argument("attenuator amplitude must lie in (0, 1]");
  return {ElementKind::Attenuator, amplitude,
          {cx{amplitude, 0}, cx{0, 0}, cx{0, 0}, cx{amplitude, 0}}};
}

TwoPhotonAmplitudes TwoPhotonAmplitudes::basis(int pointer_bit, int signal_bit) {
  TwoPhotonAmplitudes s;
  s.merged[static_cast<size_t>(2 * pointer_bit + signal_bit)] = cx{1, 0};
  return s;
}

double TwoPhotonAmplitudes::norm2() const {
  double n = 0.0;
  for (const cx& a : merged) n += std::norm(a);
  for (const cx& a : upper) n += std::norm(a);
  return n;
}

double TwoPhotonAmplitudes::success_amplitude() const { return std::sqrt(norm2()); }

TwoPhotonAmplitudes ppbs_coincidence(const TwoPhotonAmplitudes& in) {
  TwoPhotonAmplitudes out = in;
  if (out.split) {
    ppbs_sector(out.upper, true);
    ppbs_sector(out.merged, false);  // lower-arm pointer bypasses the splitter
  } else {
    ppbs_sector(out.merged, true);
  }
  return out;
}

TwoPhotonAmplitudes apply_element(const ChainElement& el,
                                  const TwoPhotonAmplitudes& in) {
  TwoPhotonAmplitudes out = in;
  switch (el.kind) {
    case ElementKind::BeamSplit: {
      // Pointer V displaces into the upper arm; its polarization is
      // standardized to H on entry.
      out.upper = {};
      for (int s = 0; s < 2; ++s) {
        out.upper[static_cast<size_t>(s)] = in.merged[static_cast<size_t>(2 + s)];
        out.merged[static_cast<size_t>(2 + s)] = cx{0, 0};
      }
      out.split = true;
      return out;
    }
    case ElementKind::BeamMerge: {
      // Upper arm is circular by construction: its full amplitude rides on
      // sqrt(2) times the H component. Lower-arm light exits orthogonally.
      std::array<cx, 4> merged{};
      for (int s = 0; s < 2; ++s) {
        merged[static_cast<size_t>(s)] =
            std::sqrt(2.0) * in.upper[static_cast<size_t>(s)];
        merged[static_cast<size_t>(2 + s)] = in.merged[static_cast<size_t>(s)];
      }
      out.merged = merged;
      out.upper = {};
      out.split = false;
      return out;
    }
    case ElementKind::Ppbs:
      return ppbs_coincidence(in);
    default:
      break;
  }
  switch (el.place) {
    case Placement::PointerUpperArm:
      out.upper = apply_pointer(el.matrix, in.upper);
      break;
    case Placement::PointerLowerArm:
      out.merged = apply_pointer(el.matrix, in.merged);
      break;
    case Placement::SignalPath:
      out.merged = apply_signal(el.matrix, in.merged);
      out.upper = apply_signal(el.matrix, in.upper);
      break;
    case Placement::Merged:
      out.merged = apply_pointer(el.matrix, in.merged);
      break;
  }
  return out;
}

OpticalChain build_chain(double phi, bool balanced) {
  OpticalChain chain;
  chain.phi = phi;
  chain.balanced = balanced;
  auto add = [&](const std::string& name, const JonesElement& je, Placement pl) {
    chain.elements.push_back({name, je.kind, pl, je.parameter, je.matrix});
  };
  chain.elements.push_back({"BD1", ElementKind::BeamSplit, Placement::Merged, 0.0, {}});
  add("HWP2", hwp(M_PI / 6.0), Placement::PointerUpperArm);
  chain.elements.push_back({"PPBS", ElementKind::Ppbs, Placement::Merged, 0.0, {}});
  if (balanced) {
    // Equalizes the 1/sqrt(3) the splitter takes off vertical signal light.
    ChainElement att{"ATT_SIG_H", ElementKind::Attenuator, Placement::SignalPath,
                     kInvSqrt3,
                     {cx{kInvSqrt3, 0}, cx{0, 0}, cx{0, 0}, cx{1, 0}}};
    chain.elements.push_back(att);
  }
  add("QWP1", qwp(0.0), Placement::PointerUpperArm);
  add("HWP3", hwp(phi / 4.0), Placement::PointerUpperArm);
  if (balanced)
    add("ATT_LOWER", attenuator(kInvSqrt2), Placement::PointerLowerArm);
  chain.elements.push_back({"BD2", ElementKind::BeamMerge, Placement::Merged, 0.0, {}});
  add("HWP6", hwp(M_PI / 4.0), Placement::Merged);
  return chain;
}

std::vector<TwoPhotonAmplitudes> evaluate_chain(const OpticalChain& chain,
                                                const TwoPhotonAmplitudes& in) {
  std::vector<TwoPhotonAmplitudes> trace;
  trace.reserve(chain.elements.size());
  TwoPhotonAmplitudes cur = in;
  for (const ChainElement& el : chain.elements) {
    cur = apply_element(el, cur);
    trace.push_back(cur);
  }
  return trace;
}

EffectiveGate effective_gate(const OpticalChain& chain) {
  std::vector<cx> gate(16, cx{0, 0});
  std::array<double, 4> amps{};
  for (int p = 0; p < 2; ++p)
    for (int s = 0; s < 2; ++s) {
      int col = 2 * p + s;
      auto trace = evaluate_chain(chain, TwoPhotonAmplitudes::basis(p, s));
      const TwoPhotonAmplitudes& fin = trace.back();
      for (int r = 0; r < 4; ++r)
        gate[static_cast<size_t>(r * 4 + col)] = fin.merged[static_cast<size_t>(r)];
      amps[static_cast<size_t>(col)] = fin.success_amplitude();
    }
  double lo = amps[0], hi = amps[0];
  for (double a : amps) {
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (chain.balanced && hi - lo > 1e-9)
    throw ChainUnbalanced("balanced chain produced unequal basis amplitudes");
  EffectiveGate out{Operator(std::move(gate), 4, OpKind::General), lo * lo, amps};
  return out;
}

std::string describe_chain(const OpticalChain& chain) {
  std::ostringstream os;
  auto kind_name = [](ElementKind k) {
    switch (k) {
      case ElementKind::HalfWave: return "half-wave plate";
      case ElementKind::QuarterWave: return "quarter-wave plate";
      case ElementKind::Polarizer: return "polarizer";
      case ElementKind::Attenuator: return "attenuator";
      case ElementKind::BeamSplit: return "beam displacer (split)";
      case ElementKind::BeamMerge: return "beam displacer (merge)";
      case ElementKind::Ppbs: return "partially polarizing beam splitter";
    }
    return "?";
  };
  auto place_name = [](Placement p) {
    switch (p) {
      case Placement::PointerUpperArm: return "pointer upper arm";
      case Placement::PointerLowerArm: return "pointer lower arm";
      case Placement::SignalPath: return "signal path";
      case Placement::Merged: return "common path";
    }
    return "?";
  };
  for (const ChainElement& el : chain.elements) {
    os << el.name << "  " << kind_name(el.kind) << "  " << place_name(el.place);
    if (el.kind == ElementKind::HalfWave || el.kind == ElementKind::QuarterWave ||
        el.kind == ElementKind::Polarizer)
      os << "  angle=" << el.parameter * 180.0 / M_PI << "deg";
    else if (el.kind == ElementKind::Attenuator)
      os << "  amplitude=" << el.parameter;
    os << "\n";
  }
  return os.str();
}

}  // namespace optics
}  // namespace wvsim
