#pragma once

// Dimension-2 and dimension-4 complex linear algebra: pure states,
// operators, tensor products, projections, partial trace, fidelity and
// Hermitian matrix exponentials. Joint basis ordering is fixed:
// index = 2*(system bit) + (pointer bit), system factor first.

#include <complex>
#include <utility>
#include <vector>

#include "wvsim/errors.hpp"

namespace wvsim {

using cx = std::complex<double>;

class PureState {
 public:
  PureState() = default;
  explicit PureState(std::vector<cx> amps) : amps_(std::move(amps)) {
    if (amps_.size() != 2 && amps_.size() != 4)
      throw DimensionMismatch("PureState dimension must be 2 or 4");
  }

  static PureState null_state() { return PureState(Null{}); }

  int dim() const { return static_cast<int>(amps_.size()); }
  bool is_null() const { return null_; }
  const std::vector<cx>& amps() const { return amps_; }
  cx operator[](int i) const { return amps_[static_cast<size_t>(i)]; }

  double norm2() const;
  double norm() const;
  PureState normalized() const;
  PureState scaled(cx factor) const;

 private:
  struct Null {};
  explicit PureState(Null) : null_(true) {}
  std::vector<cx> amps_;
  bool null_ = false;
};

enum class OpKind { Hermitian, Unitary, General };

class Operator {
 public:
  Operator() = default;
  // Row-major entries; the kind flag is verified (1e-12 entrywise).
  Operator(std::vector<cx> entries, int dim, OpKind kind);

  int dim() const { return dim_; }
  OpKind kind() const { return kind_; }
  const std::vector<cx>& entries() const { return entries_; }
  cx at(int r, int c) const { return entries_[static_cast<size_t>(r * dim_ + c)]; }

  Operator dagger() const;
  Operator scaled(cx factor) const;

 private:
  std::vector<cx> entries_;
  int dim_ = 0;
  OpKind kind_ = OpKind::General;
};

class DensityMatrix {
 public:
  DensityMatrix() : entries_(4, cx{0.0, 0.0}) {}
  explicit DensityMatrix(std::vector<cx> entries);

  cx at(int r, int c) const { return entries_[static_cast<size_t>(r * 2 + c)]; }
  const std::vector<cx>& entries() const { return entries_; }

 private:
  std::vector<cx> entries_;  // 2x2 row-major, hermitian, trace one
};

enum class Subsystem { System, Pointer };

// Standard states and operators.
PureState ket0();
PureState ket1();
PureState ket_plus();
PureState ket_minus();
PureState ket_l();  // (|0> + i|1>)/sqrt(2)
PureState ket_r();  // (|0> - i|1>)/sqrt(2)

Operator identity(int dim);
Operator pauli_x();
Operator pauli_y();
Operator pauli_z();

cx inner(const PureState& a, const PureState& b);  // <a|b>
Operator matmul(const Operator& a, const Operator& b);
Operator tensor_op(const Operator& a, const Operator& b);

PureState tensor(const PureState& a, const PureState& b);
PureState apply(const Operator& op, const PureState& s);
double expectation(const Operator& obs, const PureState& s);

// Contracts |s> over the named subsystem with <target|. The residual is the
// unnormalized state of the other subsystem; probability is its squared norm.
// Zero probability yields a null-flagged residual.
std::pair<PureState, double> project(const PureState& s, const PureState& target,
                                     Subsystem on);

DensityMatrix partial_trace_system(const PureState& s);
double fidelity(const PureState& psi, const DensityMatrix& rho);

// Eigendecomposition of a Hermitian operator; eigenvectors are the columns
// of the returned matrix. Closed form for dim 2, cyclic Jacobi for dim 4.
std::pair<std::vector<double>, std::vector<cx>> eigh(const Operator& h);

// Exact exp(-i * scale * H) for Hermitian H.
Operator exp_hermitian(const Operator& h, double scale);

}  // namespace wvsim
