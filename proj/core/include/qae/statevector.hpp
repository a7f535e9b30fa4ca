#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qae {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 24;

enum class GateKind : std::uint8_t { X, H, RX, RY, RZ, CNOT, CRX, CRY, CRZ, CSWAP };

std::string_view gate_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);

bool is_rotation(GateKind kind);             // RX, RY, RZ
bool is_controlled_rotation(GateKind kind);  // CRX, CRY, CRZ
bool takes_angle(GateKind kind);             // either of the above

/// One gate of the circuit alphabet. Single-target kinds use targets[0];
/// CNOT/CR* use controls[0] -> targets[0]; CSWAP uses controls[0] and both
/// targets. `angle` is ignored by non-rotation kinds.
struct GateOp {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  std::vector<int> controls;
  double angle = 0.0;

  static GateOp single(GateKind kind, int target, double angle = 0.0);
  static GateOp controlled(GateKind kind, int control, int target, double angle = 0.0);
  static GateOp cswap(int control, int target_a, int target_b);
};

// Throws ContractError when arity, disjointness or index range is violated.
void validate_gate(const GateOp& gate, int n_qubits);

/// Dense pure state over n qubits.
///
/// Bit convention: qubit 0 is the most significant bit of the basis index,
/// so |101> on three qubits is index 5 with qubit0 = 1, qubit1 = 0, qubit2 = 1.
class StateVector {
 public:
  static StateVector zero(int n_qubits);
  static StateVector basis(int n_qubits, std::uint64_t index);
  // Amplitudes are taken as given; the caller is responsible for the norm.
  static StateVector from_amplitudes(std::vector<cplx> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  StateVector copy() const { return *this; }

  void apply(const GateOp& gate);

  // Kernels used directly by the circuit evaluator; indices are not checked.
  void apply_matrix(int target, std::uint64_t control_mask, const cplx (&m)[2][2]);
  void apply_real_matrix(int target, std::uint64_t control_mask, double c, double s);
  void apply_x(int target, std::uint64_t control_mask);
  void apply_swap(int a, int b, std::uint64_t control_mask);

  double norm_squared() const;
  double probability(std::uint64_t index) const;
  /// Probability of each bit pattern on `qubits`; pattern bit j (MSB first)
  /// corresponds to qubits[j].
  std::vector<double> marginal_probabilities(std::span<const int> qubits) const;

  /// |this> (x) |other>, with this state's qubits leading.
  StateVector tensor(const StateVector& other) const;

  std::uint64_t bit_mask(int qubit) const {
    return std::uint64_t{1} << (n_qubits_ - 1 - qubit);
  }

 private:
  StateVector(int n_qubits, std::vector<cplx> amps)
      : n_qubits_(n_qubits), amps_(std::move(amps)) {}

  void check_qubit(int qubit) const;

  int n_qubits_ = 0;
  std::vector<cplx> amps_;
};

cplx inner_product(const StateVector& a, const StateVector& b);

/// Small dense density operator, used as a verification oracle.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const Eigen::MatrixXcd& entries() const { return rho_; }
  cplx trace() const { return rho_.trace(); }

  // Largest deviation from the Hermitian, unit-trace, PSD invariants.
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXcd rho_;
};

inline constexpr int kMaxReducedQubits = 6;

/// Partial trace over every qubit not listed. Row/column index bit j (MSB
/// first) corresponds to qubits[j].
DensityMatrix reduced_density_matrix(const StateVector& state, std::span<const int> qubits);

/// Tr[a b], real for Hermitian arguments.
double trace_product(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qae
