#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qae/circuits.hpp"
#include "qae/data.hpp"

namespace qae {

using Objective = std::function<double(std::span<const double>)>;

enum class OptimizerMethod : std::uint8_t { Cobyla, NelderMead };

std::string_view optimizer_method_name(OptimizerMethod method);
OptimizerMethod optimizer_method_from_name(std::string_view name);

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::Cobyla;
  std::size_t max_evals = 5000;
  double rho_begin = 1.0;
  double rho_end = 1e-6;
  std::uint64_t seed = 0;  // parameter initialisation

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

void validate(const OptimizerConfig& config);

struct OptimizeResult {
  std::vector<double> x;        // best point seen
  double f = 0.0;               // objective at x
  std::vector<double> history;  // one entry per evaluation, in order
  std::string stop_reason;
};

/// Derivative-free minimisation by linear approximation on a simplex of
/// dim + 1 points inside a trust region whose radius shrinks from rho_begin
/// to rho_end (Powell's COBYLA without constraints).
OptimizeResult cobyla_minimize(const Objective& f, std::vector<double> x0,
                               const OptimizerConfig& config);

/// Nelder-Mead downhill simplex, kept as an independent cross-check.
OptimizeResult nelder_mead_minimize(const Objective& f, std::vector<double> x0,
                                    const OptimizerConfig& config);

OptimizeResult minimize(const Objective& f, std::vector<double> x0, const OptimizerConfig& config);

/// Uniform on [0, 2pi), reproducible per seed.
std::vector<double> init_params(std::size_t count, std::uint64_t seed);

/// Weighted mean swap-test failure probability over a labelled set.
///
/// Encoded AB states are prepared once; each evaluation runs per-sample
/// circuits (in parallel when threads > 1) and reduces in sample order.
class TrainingObjective {
 public:
  TrainingObjective(const EncodedDataset& data, const AnsatzSpec& spec,
                    const RegisterLayout& layout, std::vector<double> weights = {},
                    SwapTestEvaluation mode = SwapTestEvaluation::ReferenceOverlap,
                    unsigned threads = 0);

  double operator()(std::span<const double> theta) const;

  std::size_t param_count() const { return ansatz_.param_count(); }
  std::size_t size() const { return states_.size(); }
  const AnsatzSpec& spec() const { return spec_; }
  const RegisterLayout& layout() const { return layout_; }

 private:
  AnsatzSpec spec_;
  RegisterLayout layout_;
  Circuit ansatz_;
  std::vector<StateVector> states_;
  std::vector<std::uint64_t> labels_;
  std::vector<double> weights_;
  SwapTestEvaluation mode_;
  unsigned threads_;
};

double training_cost(std::span<const double> theta, const TrainingObjective& objective);

struct TrainResult {
  static constexpr std::string_view kSchemaVersion = "1.0";

  std::vector<double> theta_star;
  std::vector<double> cost_history;
  std::size_t evaluations_used = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  std::string stop_reason;
  AnsatzSpec spec;
  RegisterLayout layout;
  OptimizerConfig optimizer;
  std::size_t class_count = 0;
  std::uint64_t data_seed = 0;
  std::string dataset_fingerprint;
};

TrainResult train(const EncodedDataset& data, const AnsatzSpec& spec, const RegisterLayout& layout,
                  const OptimizerConfig& config, unsigned threads = 0);

}  // namespace qae
