#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qae/circuits.hpp"

namespace qae {

inline constexpr std::size_t kDefaultFidelityInputs = 2000;
inline constexpr std::size_t kDefaultHistogramBins = 75;
inline constexpr std::size_t kMinFidelitySamples = 100;
inline constexpr double kHaarMassFloor = 1e-12;

/// |<psi_2i|psi_2i+1>|^2 for consecutive pairs of U(params_j) |inputs_j>.
std::vector<double> pair_fidelities(const Circuit& ansatz,
                                    std::span<const std::vector<double>> inputs,
                                    std::span<const std::vector<double>> params,
                                    unsigned threads = 0);

/// Draws n_inputs non-negative uniform vectors of length 2^n (amplitude
/// encoded) and n_inputs independent parameter vectors on [0, 2pi), then
/// returns n_inputs / 2 pair fidelities. Draws are sequential, so the result
/// depends only on the seed.
std::vector<double> sample_fidelities(const AnsatzSpec& spec,
                                      std::size_t n_inputs = kDefaultFidelityInputs,
                                      std::uint64_t seed = 0, unsigned threads = 0);

/// Pairwise fidelity density of Haar-random states in dimension N:
/// (N - 1)(1 - F)^(N - 2).
double haar_pdf(double fidelity, double dimension);

/// Exact Haar probability of each of `bins` uniform bins on [0, 1].
std::vector<double> haar_bin_masses(double dimension, std::size_t bins);

struct ExpressibilityReport {
  double d_kl = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_bins = 0;
  std::vector<double> empirical;  // histogram probabilities
  std::vector<double> haar;       // floored Haar bin masses
  AnsatzSpec spec;
  std::uint64_t seed = 0;
};

/// KL(empirical || Haar) over a uniform histogram; empty bins contribute 0
/// and Haar masses are floored at kHaarMassFloor.
ExpressibilityReport kl_divergence(std::span<const double> fidelities, double dimension,
                                   std::size_t bins = kDefaultHistogramBins);

ExpressibilityReport expressibility(const AnsatzSpec& spec,
                                    std::size_t n_inputs = kDefaultFidelityInputs,
                                    std::uint64_t seed = 0,
                                    std::size_t bins = kDefaultHistogramBins,
                                    unsigned threads = 0);

}  // namespace qae
