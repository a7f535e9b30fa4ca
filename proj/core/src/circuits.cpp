#include "qae/circuits.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qae/error.hpp"

namespace qae {
namespace {

void apply_shifted(StateVector& state, const GateOp& gate, double angle, int offset) {
  const int target = gate.targets[0] + offset;
  const std::uint64_t cmask =
      gate.controls.empty() ? 0 : state.bit_mask(gate.controls[0] + offset);
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  switch (gate.kind) {
    case GateKind::X:
    case GateKind::CNOT:
      state.apply_x(target, cmask);
      return;
    case GateKind::H: {
      constexpr double r = 0.70710678118654752440;
      const cplx m[2][2] = {{r, r}, {r, -r}};
      state.apply_matrix(target, cmask, m);
      return;
    }
    case GateKind::RX:
    case GateKind::CRX: {
      const cplx m[2][2] = {{c, cplx{0.0, -s}}, {cplx{0.0, -s}, c}};
      state.apply_matrix(target, cmask, m);
      return;
    }
    case GateKind::RY:
    case GateKind::CRY:
      state.apply_real_matrix(target, cmask, c, s);
      return;
    case GateKind::RZ:
    case GateKind::CRZ: {
      const cplx m[2][2] = {{cplx{c, -s}, 0.0}, {0.0, cplx{c, s}}};
      state.apply_matrix(target, cmask, m);
      return;
    }
    case GateKind::CSWAP:
      state.apply_swap(target, gate.targets[1] + offset, cmask);
      return;
  }
}

GateKind controlled_kind(ArbitraryGate gate) {
  switch (gate) {
    case ArbitraryGate::RX: return GateKind::CRX;
    case ArbitraryGate::RY: return GateKind::CRY;
    case ArbitraryGate::RZ: return GateKind::CRZ;
    case ArbitraryGate::X: return GateKind::CNOT;
    case ArbitraryGate::None: break;
  }
  throw ConfigError("ansatz requires an arbitrary gate");
}

// Controlled gate of the template's arbitrary kind; CNOT carries no parameter.
void add_entangler(Circuit& c, GateKind kind, int control, int target) {
  if (kind == GateKind::CNOT) {
    c.add(GateOp::controlled(kind, control, target));
  } else {
    c.add_parameterized(GateOp::controlled(kind, control, target));
  }
}

void add_layer(Circuit& c, GateKind kind, int n) {
  for (int q = 0; q < n; ++q) c.add_parameterized(GateOp::single(kind, q));
}

// Ring with control i -> target i+1 (mod n), starting from the last qubit.
void add_forward_ring(Circuit& c, GateKind kind, int n) {
  for (int i = n - 1; i >= 0; --i) add_entangler(c, kind, i, (i + 1) % n);
}

// Ring with control i -> target i-1 (mod n), visiting n-1, 0, 1, ..., n-2.
void add_backward_ring(Circuit& c, GateKind kind, int n) {
  for (int j = 0; j < n; ++j) {
    const int i = (n - 1 + j) % n;
    add_entangler(c, kind, i, (i + n - 1) % n);
  }
}

}  // namespace

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ConfigError("circuit qubit count " + std::to_string(n_qubits) + " out of range");
  }
}

void Circuit::add(GateOp gate) {
  validate_gate(gate, n_qubits_);
  gates_.push_back(std::move(gate));
  slots_.push_back(std::nullopt);
}

std::size_t Circuit::add_parameterized(GateOp gate) {
  if (!takes_angle(gate.kind)) {
    throw ContractError(std::string(gate_name(gate.kind)) + " takes no parameter");
  }
  validate_gate(gate, n_qubits_);
  gates_.push_back(std::move(gate));
  slots_.push_back(param_count_);
  return param_count_++;
}

void Circuit::apply(StateVector& state, std::span<const double> params, int qubit_offset) const {
  if (qubit_offset < 0 || qubit_offset + n_qubits_ > state.n_qubits()) {
    throw ContractError("circuit on " + std::to_string(n_qubits_) + " qubits at offset " +
                        std::to_string(qubit_offset) + " does not fit a " +
                        std::to_string(state.n_qubits()) + "-qubit state");
  }
  if (params.size() != param_count_) {
    throw ContractError("circuit expects " + std::to_string(param_count_) +
                        " parameters, got " + std::to_string(params.size()));
  }
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const double angle = slots_[g] ? params[*slots_[g]] : gates_[g].angle;
    apply_shifted(state, gates_[g], angle, qubit_offset);
  }
}

std::string Circuit::dump() const {
  std::ostringstream out;
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const auto& gate = gates_[g];
    out << gate_name(gate.kind) << " q";
    for (std::size_t i = 0; i < gate.targets.size(); ++i) {
      out << (i ? "," : "") << gate.targets[i];
    }
    if (!gate.controls.empty()) {
      out << " c";
      for (std::size_t i = 0; i < gate.controls.size(); ++i) {
        out << (i ? "," : "") << gate.controls[i];
      }
    }
    if (slots_[g]) {
      out << " slot=" << *slots_[g];
    } else if (takes_angle(gate.kind)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", gate.angle);
      out << " angle=" << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string_view arbitrary_gate_name(ArbitraryGate gate) {
  switch (gate) {
    case ArbitraryGate::None: return "none";
    case ArbitraryGate::RX: return "RX";
    case ArbitraryGate::RY: return "RY";
    case ArbitraryGate::RZ: return "RZ";
    case ArbitraryGate::X: return "X";
  }
  return "?";
}

ArbitraryGate arbitrary_gate_from_name(std::string_view name) {
  for (auto g : {ArbitraryGate::None, ArbitraryGate::RX, ArbitraryGate::RY, ArbitraryGate::RZ,
                 ArbitraryGate::X}) {
    if (arbitrary_gate_name(g) == name) return g;
  }
  if (name == "-" || name.empty()) return ArbitraryGate::None;
  throw ConfigError("unknown arbitrary gate '" + std::string(name) + "'");
}

void validate(const AnsatzSpec& spec) {
  using G = ArbitraryGate;
  bool ok = false;
  switch (spec.circuit_id) {
    case 1:
    case 2:
    case 3:
    case 4: ok = spec.gate == G::None; break;
    case 5: ok = spec.gate == G::RY || spec.gate == G::X; break;
    case 6: ok = spec.gate == G::RZ || spec.gate == G::RX || spec.gate == G::X; break;
    case 7: ok = spec.gate == G::RZ || spec.gate == G::RX; break;
    default:
      throw ConfigError("circuit id " + std::to_string(spec.circuit_id) + " outside 1..7");
  }
  if (!ok) {
    throw ConfigError("circuit " + std::to_string(spec.circuit_id) + " does not accept gate '" +
                      std::string(arbitrary_gate_name(spec.gate)) + "'");
  }
  if (spec.repetitions < 0) throw ConfigError("repetitions must be non-negative");
  if (spec.n_qubits < 2 || spec.n_qubits > kMaxQubits) {
    throw ConfigError("ansatz needs between 2 and " + std::to_string(kMaxQubits) + " qubits");
  }
}

Circuit build_ansatz(const AnsatzSpec& spec) {
  validate(spec);
  const int n = spec.n_qubits;
  const int reps = spec.repetitions;
  Circuit c(n);
  switch (spec.circuit_id) {
    case 1:
    case 2:
    case 3:
      add_layer(c, GateKind::RY, n);
      for (int r = 0; r < reps; ++r) {
        if (spec.circuit_id == 1) {
          for (int ctrl = n - 2; ctrl >= 0; --ctrl) add_entangler(c, GateKind::CNOT, ctrl, ctrl + 1);
        } else {
          if (spec.circuit_id == 3) add_entangler(c, GateKind::CNOT, n - 1, 0);
          for (int ctrl = 0; ctrl + 1 < n; ++ctrl) add_entangler(c, GateKind::CNOT, ctrl, ctrl + 1);
        }
        add_layer(c, GateKind::RY, n);
      }
      break;
    case 4:
      for (int r = 0; r < reps; ++r) {
        for (int ctrl = 0; ctrl < n; ++ctrl) {
          for (int tgt = ctrl + 1; tgt < n; ++tgt) add_entangler(c, GateKind::CRY, ctrl, tgt);
        }
      }
      break;
    case 5: {
      const GateKind kind = controlled_kind(spec.gate);
      for (int r = 0; r < reps; ++r) {
        add_layer(c, GateKind::RX, n);
        for (int ctrl = 0; ctrl < n; ++ctrl) {
          for (int tgt = 0; tgt < n; ++tgt) {
            if (tgt != ctrl) add_entangler(c, kind, ctrl, tgt);
          }
        }
        add_layer(c, GateKind::RX, n);
      }
      break;
    }
    case 6: {
      const GateKind kind = controlled_kind(spec.gate);
      for (int r = 0; r < reps; ++r) {
        add_layer(c, GateKind::RY, n);
        add_forward_ring(c, kind, n);
        add_layer(c, GateKind::RY, n);
        add_backward_ring(c, kind, n);
      }
      break;
    }
    case 7: {
      const GateKind kind = controlled_kind(spec.gate);
      for (int r = 0; r < reps; ++r) {
        add_layer(c, GateKind::RX, n);
        add_layer(c, GateKind::RZ, n);
        add_forward_ring(c, kind, n);
      }
      break;
    }
  }
  return c;
}

std::size_t ansatz_param_count(const AnsatzSpec& spec) {
  validate(spec);
  const auto n = static_cast<std::size_t>(spec.n_qubits);
  const auto m = static_cast<std::size_t>(spec.repetitions);
  const bool cnot = spec.gate == ArbitraryGate::X;
  switch (spec.circuit_id) {
    case 1:
    case 2:
    case 3: return n * (m + 1);
    case 4: return m * n * (n - 1) / 2;
    case 5: return m * (2 * n + (cnot ? 0 : n * (n - 1)));
    case 6: return m * (2 * n + (cnot ? 0 : 2 * n));
    case 7: return m * 3 * n;
  }
  return 0;
}

GateCensus gate_census(const Circuit& circuit) {
  GateCensus census;
  for (const auto& g : circuit.gates()) {
    if (g.kind == GateKind::CNOT) {
      ++census.cnot;
    } else if (is_rotation(g.kind)) {
      ++census.rotation;
    } else if (is_controlled_rotation(g.kind)) {
      ++census.controlled_rotation;
    }
  }
  return census;
}

GateCensus ansatz_gate_census(const AnsatzSpec& spec) { return gate_census(build_ansatz(spec)); }

RegisterLayout RegisterLayout::make(int n, int l) {
  RegisterLayout layout{n, l};
  validate(layout);
  return layout;
}

void validate(const RegisterLayout& layout) {
  if (layout.l < 1) throw ConfigError("trash register needs at least one qubit");
  if (layout.k() < 1) {
    throw ConfigError("latent register is empty: n = " + std::to_string(layout.n) +
                      ", l = " + std::to_string(layout.l));
  }
  if (layout.total_qubits() > kMaxQubits) throw ConfigError("register exceeds qubit limit");
}

std::vector<int> RegisterLayout::trash_qubits() const {
  std::vector<int> q;
  for (int i = k(); i < n; ++i) q.push_back(i);
  return q;
}

std::vector<int> RegisterLayout::reference_qubits() const {
  std::vector<int> q;
  for (int i = n; i < n + l; ++i) q.push_back(i);
  return q;
}

StateVector amplitude_encode(std::span<const double> x) {
  const std::size_t dim = x.size();
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw ConfigError("amplitude encoding needs a power-of-two length >= 2, got " +
                      std::to_string(dim));
  }
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw DataError("cannot amplitude-encode a zero or non-finite vector");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  std::vector<cplx> amps(dim);
  for (std::size_t i = 0; i < dim; ++i) amps[i] = x[i] * inv;
  return StateVector::from_amplitudes(std::move(amps));
}

Circuit label_encode(std::uint64_t y, int l) {
  if (l < 1 || l > 16) throw ConfigError("label register size out of range");
  if (y >= (std::uint64_t{1} << l)) {
    throw DataError("label " + std::to_string(y) + " does not fit in " + std::to_string(l) +
                    " qubits");
  }
  Circuit c(l);
  for (int j = 0; j < l; ++j) {
    const bool set = (y >> (l - 1 - j)) & 1u;
    c.add(GateOp::single(GateKind::RX, j, set ? std::numbers::pi : 0.0));
  }
  return c;
}

namespace {

void check_dims(std::span<const double> x, std::span<const double> theta,
                const RegisterLayout& layout, const AnsatzSpec& spec) {
  validate(layout);
  if (spec.n_qubits != layout.n) {
    throw ContractError("ansatz acts on " + std::to_string(spec.n_qubits) +
                        " qubits but the AB register has " + std::to_string(layout.n));
  }
  if (x.size() != (std::size_t{1} << layout.n)) {
    throw ContractError("input length " + std::to_string(x.size()) + " does not match 2^" +
                        std::to_string(layout.n));
  }
  if (theta.size() != ansatz_param_count(spec)) {
    throw ContractError("parameter vector has length " + std::to_string(theta.size()) +
                        ", ansatz needs " + std::to_string(ansatz_param_count(spec)));
  }
}

StateVector run_full_swap_test(const StateVector& encoded_ab, std::uint64_t y,
                               const Circuit& ansatz, std::span<const double> theta,
                               const RegisterLayout& layout) {
  StateVector state = encoded_ab.tensor(StateVector::zero(layout.l + 1));
  label_encode(y, layout.l).apply(state, {}, layout.n);
  ansatz.apply(state, theta, 0);
  const int anc = layout.ancilla();
  state.apply(GateOp::single(GateKind::H, anc));
  for (int j = 0; j < layout.l; ++j) {
    state.apply(GateOp::cswap(anc, layout.k() + j, layout.n + j));
  }
  state.apply(GateOp::single(GateKind::H, anc));
  return state;
}

}  // namespace

TrainingEvaluation assemble_training_circuit(std::span<const double> x, std::uint64_t y,
                                             std::span<const double> theta,
                                             const RegisterLayout& layout,
                                             const AnsatzSpec& spec) {
  check_dims(x, theta, layout, spec);
  const Circuit ansatz = build_ansatz(spec);
  StateVector state = run_full_swap_test(amplitude_encode(x), y, ansatz, theta, layout);
  const int anc = layout.ancilla();
  const double p1 = state.marginal_probabilities(std::span<const int>(&anc, 1))[1];
  return TrainingEvaluation{std::move(state), p1};
}

double swap_test_probability(const StateVector& encoded_ab, std::uint64_t y,
                             const Circuit& ansatz, std::span<const double> theta,
                             const RegisterLayout& layout, SwapTestEvaluation mode) {
  if (encoded_ab.n_qubits() != layout.n || ansatz.n_qubits() != layout.n) {
    throw ContractError("encoded state and ansatz must span the AB register");
  }
  if (y >= (std::uint64_t{1} << layout.l)) throw DataError("label does not fit trash register");
  if (mode == SwapTestEvaluation::FullCircuit) {
    const StateVector state = run_full_swap_test(encoded_ab, y, ansatz, theta, layout);
    // Ancilla is the least significant qubit.
    double p1 = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 1; i < amps.size(); i += 2) p1 += std::norm(amps[i]);
    return p1;
  }
  StateVector state = encoded_ab.copy();
  ansatz.apply(state, theta, 0);
  const auto amps = state.amplitudes();
  const std::size_t stride = std::size_t{1} << layout.l;
  double overlap = 0.0;
  for (std::size_t i = y; i < amps.size(); i += stride) overlap += std::norm(amps[i]);
  return std::max(0.0, 0.5 * (1.0 - overlap));
}

std::vector<double> trash_marginal(const StateVector& encoded_ab, const Circuit& ansatz,
                                   std::span<const double> theta, const RegisterLayout& layout) {
  if (encoded_ab.n_qubits() != layout.n || ansatz.n_qubits() != layout.n) {
    throw ContractError("encoded state and ansatz must span the AB register");
  }
  StateVector state = encoded_ab.copy();
  ansatz.apply(state, theta, 0);
  // Trash qubits are the l least significant bits of the AB index.
  const std::size_t patterns = std::size_t{1} << layout.l;
  std::vector<double> out(patterns, 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) out[i & (patterns - 1)] += std::norm(amps[i]);
  return out;
}

std::vector<double> assemble_prediction_circuit(std::span<const double> x,
                                                std::span<const double> theta,
                                                const RegisterLayout& layout,
                                                const AnsatzSpec& spec) {
  check_dims(x, theta, layout, spec);
  return trash_marginal(amplitude_encode(x), build_ansatz(spec), theta, layout);
}

}  // namespace qae
