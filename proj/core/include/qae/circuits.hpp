#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qae/statevector.hpp"

namespace qae {

/// Ordered gate list over `n_qubits`, where each angle-taking gate either
/// carries a fixed angle or reads one entry of a parameter vector.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t param_count() const { return param_count_; }
  std::span<const GateOp> gates() const { return gates_; }
  std::optional<std::size_t> slot(std::size_t gate_index) const { return slots_[gate_index]; }

  // Fixed gate (angle taken from the GateOp).
  void add(GateOp gate);
  // Angle-taking gate bound to the next free parameter slot; returns that slot.
  std::size_t add_parameterized(GateOp gate);

  /// Apply every gate to `state`, shifting qubit indices by `qubit_offset`.
  void apply(StateVector& state, std::span<const double> params, int qubit_offset = 0) const;

  /// One line per gate: `KIND q<targets> [c<controls>] [slot=<i>|angle=<v>]`.
  std::string dump() const;

 private:
  int n_qubits_;
  std::vector<GateOp> gates_;
  std::vector<std::optional<std::size_t>> slots_;
  std::size_t param_count_ = 0;
};

/// Gate filling the open positions of an ansatz template.
enum class ArbitraryGate : std::uint8_t { None, RX, RY, RZ, X };

std::string_view arbitrary_gate_name(ArbitraryGate gate);
ArbitraryGate arbitrary_gate_from_name(std::string_view name);

struct AnsatzSpec {
  int circuit_id = 3;
  ArbitraryGate gate = ArbitraryGate::None;
  int repetitions = 20;
  int n_qubits = 8;

  friend bool operator==(const AnsatzSpec&, const AnsatzSpec&) = default;
};

// Throws ConfigError unless (circuit_id, gate) is one of the supported pairs:
// circuits 1-4 with None, 5 with RY/X, 6 with RZ/RX/X, 7 with RZ/RX.
void validate(const AnsatzSpec& spec);

Circuit build_ansatz(const AnsatzSpec& spec);
std::size_t ansatz_param_count(const AnsatzSpec& spec);

struct GateCensus {
  std::size_t cnot = 0;
  std::size_t rotation = 0;
  std::size_t controlled_rotation = 0;

  std::size_t total() const { return cnot + rotation + controlled_rotation; }
  friend bool operator==(const GateCensus&, const GateCensus&) = default;
};

GateCensus gate_census(const Circuit& circuit);
GateCensus ansatz_gate_census(const AnsatzSpec& spec);

/// Qubit partition of the training register: latent A = [0, k), trash
/// B = [k, n), reference B' = [n, n + l), ancilla = n + l.
struct RegisterLayout {
  int n = 8;
  int l = 3;

  static RegisterLayout make(int n, int l);

  int k() const { return n - l; }
  int total_qubits() const { return n + l + 1; }
  int ancilla() const { return n + l; }
  std::vector<int> trash_qubits() const;
  std::vector<int> reference_qubits() const;

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;
};

void validate(const RegisterLayout& layout);

/// Real amplitudes x / |x|. Length must be a power of two.
StateVector amplitude_encode(std::span<const double> x);

/// One RX per qubit with angle pi where bit j (MSB first) of y is set.
Circuit label_encode(std::uint64_t y, int l);

/// How the ancilla probability of the swap test is obtained.
enum class SwapTestEvaluation : std::uint8_t {
  // Simulate the full n + l + 1 qubit circuit including H-CSWAP-H.
  FullCircuit,
  // The reference register holds the basis state |y>, so
  // P(1) = (1 - <y|rho_B|y>) / 2 follows from the AB state alone.
  ReferenceOverlap,
};

struct TrainingEvaluation {
  StateVector state;       // final n + l + 1 qubit state (FullCircuit only)
  double p_ancilla_one = 0.0;
};

/// Encode x on AB, V_L(y) on B', U(theta) on AB, then the swap test between
/// B and B'. Returns the final state and P(ancilla = 1).
TrainingEvaluation assemble_training_circuit(std::span<const double> x, std::uint64_t y,
                                             std::span<const double> theta,
                                             const RegisterLayout& layout,
                                             const AnsatzSpec& spec);

/// Swap-test failure probability for an already-encoded AB state.
double swap_test_probability(const StateVector& encoded_ab, std::uint64_t y,
                             const Circuit& ansatz, std::span<const double> theta,
                             const RegisterLayout& layout, SwapTestEvaluation mode);

/// Marginal distribution over the trash register after U(theta) V(x).
std::vector<double> assemble_prediction_circuit(std::span<const double> x,
                                                std::span<const double> theta,
                                                const RegisterLayout& layout,
                                                const AnsatzSpec& spec);

std::vector<double> trash_marginal(const StateVector& encoded_ab, const Circuit& ansatz,
                                   std::span<const double> theta, const RegisterLayout& layout);

}  // namespace qae
