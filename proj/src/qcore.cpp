#include "wvsim/qcore.hpp"

#include <cmath>
#include <cstdlib>

namespace wvsim {

namespace {
constexpr double kFlagTol = 1e-12;

double sq(double x) { return x * x; }
}  // namespace

double PureState::norm2() const {
  double n = 0.0;
  for (const cx& a : amps_) n += std::norm(a);
  return n;
}

double PureState::norm() const { return std::sqrt(norm2()); }

PureState PureState::normalized() const {
  if (null_) return *this;
  double n = norm();
  if (n < kFlagTol) return null_state();
  return scaled(cx{1.0 / n, 0.0});
}

PureState PureState::scaled(cx factor) const {
  std::vector<cx> out(amps_);
  for (cx& a : out) a *= factor;
  return PureState(std::move(out));
}

Operator::Operator(std::vector<cx> entries, int dim, OpKind kind)
    : entries_(std::move(entries)), dim_(dim), kind_(kind) {
  if (dim_ != 2 && dim_ != 4)
    throw DimensionMismatch("Operator dimension must be 2 or 4");
  if (entries_.size() != static_cast<size_t>(dim_ * dim_))
    throw DimensionMismatch("Operator entry count does not match dimension");
  if (kind_ == OpKind::Hermitian) {
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c)
        if (std::abs(at(r, c) - std::conj(at(c, r))) > kFlagTol)
          throw NonHermitian("operator flagged hermitian is not hermitian");
  } else if (kind_ == OpKind::Unitary) {
    for (int r = 0; r < dim_; ++r) {
      for (int c = 0; c < dim_; ++c) {
        cx acc{0.0, 0.0};
        for (int k = 0; k < dim_; ++k) acc += std::conj(at(k, r)) * at(k, c);
        cx expect = (r == c) ? cx{1.0, 0.0} : cx{0.0, 0.0};
        if (std::abs(acc - expect) > kFlagTol)
          throw std::invalid_argument("operator flagged unitary is not unitary");
      }
    }
  }
}

Operator Operator::dagger() const {
  std::vector<cx> out(entries_.size());
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c)
      out[static_cast<size_t>(c * dim_ + r)] = std::conj(at(r, c));
  return Operator(std::move(out), dim_, kind_);
}

Operator Operator::scaled(cx factor) const {
  std::vector<cx> out(entries_);
  for (cx& e : out) e *= factor;
  return Operator(std::move(out), dim_, OpKind::General);
}

DensityMatrix::DensityMatrix(std::vector<cx> entries) : entries_(std::move(entries)) {
  if (entries_.size() != 4)
    throw DimensionMismatch("DensityMatrix must be 2x2");
}

PureState ket0() { return PureState({cx{1, 0}, cx{0, 0}}); }
PureState ket1() { return PureState({cx{0, 0}, cx{1, 0}}); }
PureState ket_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState({cx{s, 0}, cx{s, 0}});
}
PureState ket_minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState({cx{s, 0}, cx{-s, 0}});
}
PureState ket_l() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState({cx{s, 0}, cx{0, s}});
}
PureState ket_r() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState({cx{s, 0}, cx{0, -s}});
}

Operator identity(int dim) {
  std::vector<cx> m(static_cast<size_t>(dim * dim), cx{0, 0});
  for (int i = 0; i < dim; ++i) m[static_cast<size_t>(i * dim + i)] = cx{1, 0};
  return Operator(std::move(m), dim, OpKind::Unitary);
}

Operator pauli_x() {
  return Operator({cx{0, 0}, cx{1, 0}, cx{1, 0}, cx{0, 0}}, 2, OpKind::Hermitian);
}
Operator pauli_y() {
  return Operator({cx{0, 0}, cx{0, -1}, cx{0, 1}, cx{0, 0}}, 2, OpKind::Hermitian);
}
Operator pauli_z() {
  return Operator({cx{1, 0}, cx{0, 0}, cx{0, 0}, cx{-1, 0}}, 2, OpKind::Hermitian);
}

cx inner(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("inner: dimension mismatch");
  cx acc{0, 0};
  for (int i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

Operator matmul(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("matmul: dimension mismatch");
  int n = a.dim();
  std::vector<cx> out(static_cast<size_t>(n * n), cx{0, 0});
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) {
      cx ark = a.at(r, k);
      if (ark == cx{0, 0}) continue;
      for (int c = 0; c < n; ++c)
        out[static_cast<size_t>(r * n + c)] += ark * b.at(k, c);
    }
  return Operator(std::move(out), n, OpKind::General);
}

Operator tensor_op(const Operator& a, const Operator& b) {
  if (a.dim() != 2 || b.dim() != 2)
    throw DimensionMismatch("tensor_op supports 2x2 factors only");
  std::vector<cx> out(16, cx{0, 0});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out[static_cast<size_t>((2 * i + k) * 4 + (2 * j + l))] =
              a.at(i, j) * b.at(k, l);
  OpKind kind = OpKind::General;
  if (a.kind() == OpKind::Hermitian && b.kind() == OpKind::Hermitian)
    kind = OpKind::Hermitian;
  if (a.kind() == OpKind::Unitary && b.kind() == OpKind::Unitary)
    kind = OpKind::Unitary;
  return Operator(std::move(out), 4, kind);
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.dim() != 2 || b.dim() != 2)
    throw DimensionMismatch("tensor requires two single-qubit states");
  std::vector<cx> out(4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) out[static_cast<size_t>(2 * i + k)] = a[i] * b[k];
  return PureState(std::move(out));
}

PureState apply(const Operator& op, const PureState& s) {
  if (op.dim() != s.dim()) throw DimensionMismatch("apply: dimension mismatch");
  int n = s.dim();
  std::vector<cx> out(static_cast<size_t>(n), cx{0, 0});
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out[static_cast<size_t>(r)] += op.at(r, c) * s[c];
  return PureState(std::move(out));
}

double expectation(const Operator& obs, const PureState& s) {
  if (obs.kind() != OpKind::Hermitian)
    throw NonHermitian("expectation requires a hermitian observable");
  return std::real(inner(s, apply(obs, s)));
}

std::pair<PureState, double> project(const PureState& s, const PureState& target,
                                     Subsystem on) {
  if (s.dim() != 4 || target.dim() != 2)
    throw DimensionMismatch("project expects a dim-4 state and dim-2 target");
  std::vector<cx> res(2, cx{0, 0});
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      cx amp = s[2 * i + k];
      if (on == Subsystem::System)
        res[static_cast<size_t>(k)] += std::conj(target[i]) * amp;
      else
        res[static_cast<size_t>(i)] += std::conj(target[k]) * amp;
    }
  PureState residual(std::move(res));
  double p = residual.norm2();
  if (p < kFlagTol) return {PureState::null_state(), p};
  return {residual, p};
}

DensityMatrix partial_trace_system(const PureState& s) {
  if (s.dim() != 4) throw DimensionMismatch("partial_trace_system expects dim 4");
  std::vector<cx> rho(4, cx{0, 0});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        rho[static_cast<size_t>(i * 2 + j)] += s[2 * i + k] * std::conj(s[2 * j + k]);
  return DensityMatrix(std::move(rho));
}

double fidelity(const PureState& psi, const DensityMatrix& rho) {
  cx acc{0, 0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) acc += std::conj(psi[i]) * rho.at(i, j) * psi[j];
  return std::real(acc);
}

namespace {

// Cyclic Jacobi for complex Hermitian matrices, off-diagonal threshold 1e-14.
void jacobi_eigh(std::vector<cx>& a, int n, std::vector<double>& w,
                 std::vector<cx>& v) {
  v.assign(static_cast<size_t>(n * n), cx{0, 0});
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i * n + i)] = cx{1, 0};
  auto A = [&](int r, int c) -> cx& { return a[static_cast<size_t>(r * n + c)]; };
  auto V = [&](int r, int c) -> cx& { return v[static_cast<size_t>(r * n + c)]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(A(p, q));
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double g = std::abs(A(p, q));
        if (g < 1e-300) continue;
        cx phase = A(p, q) / g;
        double app = std::real(A(p, p));
        double aqq = std::real(A(q, q));
        double theta = (aqq - app) / (2.0 * g);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        cx s = phase * (t * c);
        // Rotation J: J(p,p)=c, J(p,q)=s, J(q,p)=-conj(s), J(q,q)=c.
        for (int k = 0; k < n; ++k) {  // A <- A J
          cx akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - std::conj(s) * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {  // A <- J^dag A
          cx apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = std::conj(s) * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {  // V <- V J
          cx vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - std::conj(s) * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  w.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = std::real(A(i, i));
}

}  // namespace

std::pair<std::vector<double>, std::vector<cx>> eigh(const Operator& h) {
  if (h.kind() != OpKind::Hermitian)
    throw NonHermitian("eigh requires a hermitian operator");
  int n = h.dim();
  if (n == 2) {
    double a = std::real(h.at(0, 0));
    double d = std::real(h.at(1, 1));
    cx b = h.at(0, 1);
    double gb = std::abs(b);
    double tr = a + d;
    double disc = std::sqrt(sq(a - d) + 4.0 * sq(gb));
    double l0 = 0.5 * (tr - disc);
    double l1 = 0.5 * (tr + disc);
    std::vector<cx> v(4, cx{0, 0});
    if (gb < 1e-300) {
      if (a <= d)
        v = {cx{1, 0}, cx{0, 0}, cx{0, 0}, cx{1, 0}};
      else
        v = {cx{0, 0}, cx{1, 0}, cx{1, 0}, cx{0, 0}};
    } else {
      // Eigenvector for l: (b, l - a), normalized; columns of v.
      for (int col = 0; col < 2; ++col) {
        double l = (col == 0) ? l0 : l1;
        cx e0 = b;
        cx e1 = cx{l - a, 0.0};
        double nn = std::sqrt(std::norm(e0) + std::norm(e1));
        v[static_cast<size_t>(0 * 2 + col)] = e0 / nn;
        v[static_cast<size_t>(1 * 2 + col)] = e1 / nn;
      }
    }
    return {{l0, l1}, v};
  }
  std::vector<cx> a = h.entries();
  std::vector<double> w;
  std::vector<cx> v;
  jacobi_eigh(a, n, w, v);
  return {w, v};
}

Operator exp_hermitian(const Operator& h, double scale) {
  auto [w, v] = eigh(h);
  int n = h.dim();
  std::vector<cx> out(static_cast<size_t>(n * n), cx{0, 0});
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cx acc{0, 0};
      for (int k = 0; k < n; ++k) {
        cx ph = std::exp(cx{0.0, -scale * w[static_cast<size_t>(k)]});
        acc += v[static_cast<size_t>(r * n + k)] * ph *
               std::conj(v[static_cast<size_t>(c * n + k)]);
      }
      out[static_cast<size_t>(r * n + c)] = acc;
    }
  return Operator(std::move(out), n, OpKind::Unitary);
}

}  // namespace wvsim
