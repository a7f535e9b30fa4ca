#include "qae/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qae/error.hpp"

namespace qae {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::uint64_t extract_bits(std::uint64_t index, std::span<const std::uint64_t> masks) {
  std::uint64_t pattern = 0;
  for (const auto mask : masks) {
    pattern = (pattern << 1) | ((index & mask) ? 1u : 0u);
  }
  return pattern;
}

}  // namespace

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRX: return "CRX";
    case GateKind::CRY: return "CRY";
    case GateKind::CRZ: return "CRZ";
    case GateKind::CSWAP: return "CSWAP";
  }
  return "?";
}

GateKind gate_kind_from_name(std::string_view name) {
  for (auto kind : {GateKind::X, GateKind::H, GateKind::RX, GateKind::RY, GateKind::RZ,
                    GateKind::CNOT, GateKind::CRX, GateKind::CRY, GateKind::CRZ,
                    GateKind::CSWAP}) {
    if (gate_name(kind) == name) return kind;
  }
  throw FormatError("unknown gate kind '" + std::string(name) + "'");
}

bool is_rotation(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

bool is_controlled_rotation(GateKind kind) {
  return kind == GateKind::CRX || kind == GateKind::CRY || kind == GateKind::CRZ;
}

bool takes_angle(GateKind kind) { return is_rotation(kind) || is_controlled_rotation(kind); }

GateOp GateOp::single(GateKind kind, int target, double angle) {
  return GateOp{kind, {target}, {}, angle};
}

GateOp GateOp::controlled(GateKind kind, int control, int target, double angle) {
  return GateOp{kind, {target}, {control}, angle};
}

GateOp GateOp::cswap(int control, int target_a, int target_b) {
  return GateOp{GateKind::CSWAP, {target_a, target_b}, {control}, 0.0};
}

void validate_gate(const GateOp& gate, int n_qubits) {
  std::size_t want_targets = 1;
  std::size_t want_controls = 0;
  switch (gate.kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      break;
    case GateKind::CNOT:
    case GateKind::CRX:
    case GateKind::CRY:
    case GateKind::CRZ:
      want_controls = 1;
      break;
    case GateKind::CSWAP:
      want_targets = 2;
      want_controls = 1;
      break;
  }
  const std::string name(gate_name(gate.kind));
  if (gate.targets.size() != want_targets || gate.controls.size() != want_controls) {
    throw ContractError(name + ": wrong number of targets/controls");
  }
  std::vector<int> all = gate.targets;
  all.insert(all.end(), gate.controls.begin(), gate.controls.end());
  for (int q : all) {
    if (q < 0 || q >= n_qubits) {
      throw ContractError(name + ": qubit " + std::to_string(q) + " outside [0, " +
                          std::to_string(n_qubits) + ")");
    }
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw ContractError(name + ": targets and controls must be distinct");
  }
}

StateVector StateVector::zero(int n_qubits) { return basis(n_qubits, 0); }

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                      std::to_string(kMaxQubits) + "]");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw ContractError("basis index out of range");
  std::vector<cplx> amps(dim, cplx{0.0, 0.0});
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw ConfigError("amplitude count " + std::to_string(dim) + " is not a power of two >= 2");
  }
  const int n = std::countr_zero(dim);
  if (n > kMaxQubits) throw ConfigError("too many qubits");
  return StateVector(n, std::move(amplitudes));
}

void StateVector::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= n_qubits_) {
    throw ContractError("qubit " + std::to_string(qubit) + " outside [0, " +
                        std::to_string(n_qubits_) + ")");
  }
}

void StateVector::apply_matrix(int target, std::uint64_t control_mask, const cplx (&m)[2][2]) {
  const std::uint64_t tbit = bit_mask(target);
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * tbit) {
    for (std::size_t i = base; i < base + tbit; ++i) {
      if ((i & control_mask) != control_mask) continue;
      const cplx a0 = amps_[i];
      const cplx a1 = amps_[i | tbit];
      amps_[i] = m[0][0] * a0 + m[0][1] * a1;
      amps_[i | tbit] = m[1][0] * a0 + m[1][1] * a1;
    }
  }
}

// [[c, -s], [s, c]]: the RY family, kept real to halve the multiply count.
void StateVector::apply_real_matrix(int target, std::uint64_t control_mask, double c, double s) {
  const std::uint64_t tbit = bit_mask(target);
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * tbit) {
    for (std::size_t i = base; i < base + tbit; ++i) {
      if ((i & control_mask) != control_mask) continue;
      const cplx a0 = amps_[i];
      const cplx a1 = amps_[i | tbit];
      amps_[i] = c * a0 - s * a1;
      amps_[i | tbit] = s * a0 + c * a1;
    }
  }
}

void StateVector::apply_x(int target, std::uint64_t control_mask) {
  const std::uint64_t tbit = bit_mask(target);
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * tbit) {
    for (std::size_t i = base; i < base + tbit; ++i) {
      if ((i & control_mask) != control_mask) continue;
      std::swap(amps_[i], amps_[i | tbit]);
    }
  }
}

void StateVector::apply_swap(int a, int b, std::uint64_t control_mask) {
  const std::uint64_t abit = bit_mask(a);
  const std::uint64_t bbit = bit_mask(b);
  const std::size_t dim = amps_.size();
  for (std::size_t i = 0; i < dim; ++i) {
    // Visit each (a=1, b=0) index once and swap with its (a=0, b=1) partner.
    if ((i & abit) && !(i & bbit) && (i & control_mask) == control_mask) {
      std::swap(amps_[i], amps_[(i & ~abit) | bbit]);
    }
  }
}

void StateVector::apply(const GateOp& gate) {
  validate_gate(gate, n_qubits_);
  const int target = gate.targets[0];
  const std::uint64_t cmask = gate.controls.empty() ? 0 : bit_mask(gate.controls[0]);
  const double half = 0.5 * gate.angle;
  const double c = std::cos(half);
  const double s = std::sin(half);
  switch (gate.kind) {
    case GateKind::X:
    case GateKind::CNOT:
      apply_x(target, cmask);
      break;
    case GateKind::H: {
      const cplx m[2][2] = {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
      apply_matrix(target, cmask, m);
      break;
    }
    case GateKind::RX:
    case GateKind::CRX: {
      const cplx m[2][2] = {{c, cplx{0.0, -s}}, {cplx{0.0, -s}, c}};
      apply_matrix(target, cmask, m);
      break;
    }
    case GateKind::RY:
    case GateKind::CRY:
      apply_real_matrix(target, cmask, c, s);
      break;
    case GateKind::RZ:
    case GateKind::CRZ: {
      const cplx m[2][2] = {{cplx{c, -s}, 0.0}, {0.0, cplx{c, s}}};
      apply_matrix(target, cmask, m);
      break;
    }
    case GateKind::CSWAP:
      apply_swap(gate.targets[0], gate.targets[1], cmask);
      break;
  }
}

double StateVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

double StateVector::probability(std::uint64_t index) const {
  if (index >= amps_.size()) {
    throw ContractError("basis index " + std::to_string(index) + " out of range");
  }
  return std::norm(amps_[index]);
}

std::vector<double> StateVector::marginal_probabilities(std::span<const int> qubits) const {
  std::vector<std::uint64_t> masks;
  masks.reserve(qubits.size());
  std::uint64_t seen = 0;
  for (int q : qubits) {
    check_qubit(q);
    const auto m = bit_mask(q);
    if (seen & m) throw ContractError("duplicate qubit " + std::to_string(q) + " in marginal");
    seen |= m;
    masks.push_back(m);
  }
  std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    out[extract_bits(i, masks)] += std::norm(amps_[i]);
  }
  return out;
}

StateVector StateVector::tensor(const StateVector& other) const {
  const int n = n_qubits_ + other.n_qubits_;
  if (n > kMaxQubits) throw ConfigError("tensor product exceeds qubit limit");
  std::vector<cplx> amps(std::size_t{1} << n);
  const std::size_t lo = other.dim();
  for (std::size_t i = 0; i < dim(); ++i) {
    if (amps_[i] == cplx{}) continue;
    for (std::size_t j = 0; j < lo; ++j) amps[i * lo + j] = amps_[i] * other.amps_[j];
  }
  return StateVector(n, std::move(amps));
}

cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw ContractError("inner product of states with different qubit counts");
  }
  cplx acc{0.0, 0.0};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : rho_(std::move(entries)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw ContractError("density matrix must be square and non-empty");
  }
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix reduced_density_matrix(const StateVector& state, std::span<const int> qubits) {
  if (qubits.size() > static_cast<std::size_t>(kMaxReducedQubits)) {
    throw ConfigError("reduced density matrix limited to " +
                      std::to_string(kMaxReducedQubits) + " qubits");
  }
  const int n = state.n_qubits();
  std::vector<std::uint64_t> keep;
  std::uint64_t keep_all = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n) throw ContractError("qubit out of range in reduced density matrix");
    const auto m = state.bit_mask(q);
    if (keep_all & m) throw ContractError("duplicate qubit in reduced density matrix");
    keep_all |= m;
    keep.push_back(m);
  }
  std::vector<std::uint64_t> rest;
  for (int q = 0; q < n; ++q) {
    if (!(keep_all & state.bit_mask(q))) rest.push_back(state.bit_mask(q));
  }
  // psi(a, r) laid out as a matrix; rho = psi psi^dagger.
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(Eigen::Index{1} << keep.size(),
                                                Eigen::Index{1} << rest.size());
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    psi(static_cast<Eigen::Index>(extract_bits(i, keep)),
        static_cast<Eigen::Index>(extract_bits(i, rest))) = amps[i];
  }
  return DensityMatrix(psi * psi.adjoint());
}

double trace_product(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ContractError("trace product of mismatched dimensions");
  return (a.entries() * b.entries()).trace().real();
}

}  // namespace qae
