#include "wvsim/weakval.hpp"

#include <cmath>

namespace wvsim {

PureState PrePostSelection::psi_i() const {
  return PureState({cx{std::cos(gamma), 0.0}, cx{std::sin(gamma), 0.0}});
}

double PrePostSelection::overlap_prob() const {
  return std::norm(inner(psi_f, psi_i()));
}

cx weak_value(const Operator& a, const PrePostSelection& sel) {
  if (a.kind() != OpKind::Hermitian)
    throw NonHermitian("weak_value requires a hermitian observable");
  PureState psi_i = sel.psi_i();
  cx denom = inner(sel.psi_f, psi_i);
  if (std::norm(denom) < kDivergenceTol)
    throw DivergentPostSelection("pre/post-selection overlap below 1e-12");
  return inner(sel.psi_f, apply(a, psi_i)) / denom;
}

double theory_curve(double gamma) {
  // sin/(cos+sin) form: equals 1/(cot+1) and handles gamma = 0 as the limit.
  double c = std::cos(gamma);
  double s = std::sin(gamma);
  double denom = c + s;
  if (0.5 * denom * denom < kDivergenceTol)
    throw DivergentPostSelection("theory curve diverges at gamma = 3pi/4");
  return s / denom;
}

cx convert_abar_to_a(cx abar_w) { return (cx{1.0, 0.0} - abar_w) * 0.5; }

Operator measured_observable() {
  return Operator({cx{0, 0}, cx{0, 0}, cx{0, 0}, cx{1, 0}}, 2, OpKind::Hermitian);
}

Operator cphase(double phi) {
  std::vector<cx> m(16, cx{0, 0});
  m[0] = m[5] = m[10] = cx{1, 0};
  m[15] = std::exp(cx{0.0, phi});
  return Operator(std::move(m), 4, OpKind::Unitary);
}

CphaseHamiltonian hamiltonian_cphase(double phi) {
  // (I-Z) = 2|1><1|. Sign flipped relative to the raw e^{-iH} evolution so
  // that exp_hermitian(h, 1) matches the canonical diag(1,1,1,e^{+i phi}).
  const double k = -phi / 4.0;
  Operator i2 = identity(2);
  Operator z = pauli_z();
  auto sub = [](const Operator& a, const Operator& b) {
    std::vector<cx> m(a.entries());
    for (size_t i = 0; i < m.size(); ++i) m[i] -= b.entries()[i];
    return Operator(std::move(m), a.dim(), OpKind::Hermitian);
  };
  Operator imz = sub(i2, z);  // I - Z
  Operator zmi = sub(z, i2);  // Z - I
  auto scale_h = [&](const Operator& a, double f) {
    std::vector<cx> m(a.entries());
    for (cx& e : m) e *= f;
    return Operator(std::move(m), a.dim(), OpKind::Hermitian);
  };
  Operator h = scale_h(tensor_op(imz, imz), k);
  Operator h1 = scale_h(tensor_op(zmi, z), k);
  Operator h0 = scale_h(tensor_op(imz, i2), k);
  return {h, h1, h0};
}

Operator b_operator(const PrePostSelection& sel, const PureState& a0,
                    const PureState& a1) {
  if (std::abs(inner(a0, a1)) > 1e-10 || std::abs(a0.norm() - 1.0) > 1e-10 ||
      std::abs(a1.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("b_operator requires an orthonormal pair");
  PureState psi_i = sel.psi_i();
  cx denom = inner(sel.psi_f, psi_i);
  if (std::norm(denom) < kDivergenceTol)
    throw DivergentPostSelection("pre/post-selection overlap below 1e-12");
  cx c0 = inner(sel.psi_f, a0) * inner(a0, psi_i) / denom;
  cx c1 = inner(sel.psi_f, a1) * inner(a1, psi_i) / denom;
  // c0 * I + c1 * Z on the pointer.
  return Operator({c0 + c1, cx{0, 0}, cx{0, 0}, c0 - c1}, 2, OpKind::General);
}

}  // namespace wvsim
