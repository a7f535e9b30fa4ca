#include "qae/expressibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qae/error.hpp"
#include "qae/parallel.hpp"
#include "qae/rng.hpp"

namespace qae {

std::vector<double> pair_fidelities(const Circuit& ansatz,
                                    std::span<const std::vector<double>> inputs,
                                    std::span<const std::vector<double>> params, unsigned threads) {
  if (inputs.size() % 2 != 0) throw ConfigError("fidelity sampling needs an even input count");
  if (params.size() != inputs.size()) throw ContractError("one parameter vector per input");
  std::vector<double> out(inputs.size() / 2);
  parallel_for(
      out.size(),
      [&](std::size_t p) {
        StateVector a = amplitude_encode(inputs[2 * p]);
        StateVector b = amplitude_encode(inputs[2 * p + 1]);
        ansatz.apply(a, params[2 * p]);
        ansatz.apply(b, params[2 * p + 1]);
        out[p] = std::norm(inner_product(a, b));
      },
      threads);
  return out;
}

std::vector<double> sample_fidelities(const AnsatzSpec& spec, std::size_t n_inputs,
                                      std::uint64_t seed, unsigned threads) {
  if (n_inputs == 0 || n_inputs % 2 != 0) {
    throw ConfigError("fidelity sampling needs a positive even input count, got " +
                      std::to_string(n_inputs));
  }
  const Circuit ansatz = build_ansatz(spec);
  const std::size_t dim = std::size_t{1} << spec.n_qubits;
  Rng rng(seed);
  std::vector<std::vector<double>> inputs(n_inputs, std::vector<double>(dim));
  std::vector<std::vector<double>> params(n_inputs, std::vector<double>(ansatz.param_count()));
  for (std::size_t i = 0; i < n_inputs; ++i) {
    // A zero vector has probability ~0 but would be rejected by the encoder.
    do {
      for (auto& v : inputs[i]) v = rng.uniform();
    } while (std::all_of(inputs[i].begin(), inputs[i].end(), [](double v) { return v == 0.0; }));
    for (auto& t : params[i]) t = 2.0 * std::numbers::pi * rng.uniform();
  }
  return pair_fidelities(ansatz, inputs, params, threads);
}

double haar_pdf(double fidelity, double dimension) {
  return (dimension - 1.0) * std::pow(1.0 - fidelity, dimension - 2.0);
}

std::vector<double> haar_bin_masses(double dimension, std::size_t bins) {
  if (bins == 0) throw ConfigError("histogram needs at least one bin");
  // CDF(F) = 1 - (1 - F)^(N - 1).
  std::vector<double> masses(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = static_cast<double>(b) / static_cast<double>(bins);
    const double hi = static_cast<double>(b + 1) / static_cast<double>(bins);
    masses[b] = std::pow(1.0 - lo, dimension - 1.0) - std::pow(1.0 - hi, dimension - 1.0);
  }
  return masses;
}

ExpressibilityReport kl_divergence(std::span<const double> fidelities, double dimension,
                                   std::size_t bins) {
  if (fidelities.size() < kMinFidelitySamples) {
    throw ConfigError("KL divergence needs at least " + std::to_string(kMinFidelitySamples) +
                      " fidelity samples, got " + std::to_string(fidelities.size()));
  }
  if (!(dimension >= 2.0)) throw ConfigError("Hilbert dimension must be at least 2");
  ExpressibilityReport report;
  report.n_samples = fidelities.size();
  report.n_bins = bins;
  report.haar = haar_bin_masses(dimension, bins);
  for (auto& q : report.haar) q = std::max(q, kHaarMassFloor);

  std::vector<std::size_t> counts(bins, 0);
  for (double f : fidelities) {
    const double clamped = std::clamp(f, 0.0, 1.0);
    const auto b = std::min(bins - 1, static_cast<std::size_t>(clamped * static_cast<double>(bins)));
    ++counts[b];
  }
  report.empirical.resize(bins);
  double d = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double p = static_cast<double>(counts[b]) / static_cast<double>(fidelities.size());
    report.empirical[b] = p;
    if (p > 0.0) d += p * std::log(p / report.haar[b]);
  }
  report.d_kl = d;
  return report;
}

ExpressibilityReport expressibility(const AnsatzSpec& spec, std::size_t n_inputs,
                                    std::uint64_t seed, std::size_t bins, unsigned threads) {
  const auto fids = sample_fidelities(spec, n_inputs, seed, threads);
  auto report = kl_divergence(fids, std::ldexp(1.0, spec.n_qubits), bins);
  report.spec = spec;
  report.seed = seed;
  return report;
}

}  // namespace qae
