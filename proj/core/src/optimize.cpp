#include "qae/optimize.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "qae/error.hpp"
#include "qae/parallel.hpp"
#include "qae/rng.hpp"

namespace qae {

std::string_view optimizer_method_name(OptimizerMethod method) {
  return method == OptimizerMethod::Cobyla ? "cobyla" : "nelder-mead";
}

OptimizerMethod optimizer_method_from_name(std::string_view name) {
  if (name == "cobyla") return OptimizerMethod::Cobyla;
  if (name == "nelder-mead") return OptimizerMethod::NelderMead;
  throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

void validate(const OptimizerConfig& config) {
  if (config.max_evals < 1) throw ConfigError("max_evals must be at least 1");
  if (!(config.rho_begin > 0.0) || !(config.rho_end > 0.0)) {
    throw ConfigError("trust-region radii must be positive");
  }
  if (!(config.rho_end < config.rho_begin)) throw ConfigError("rho_end must be below rho_begin");
}

OptimizeResult minimize(const Objective& f, std::vector<double> x0, const OptimizerConfig& config) {
  switch (config.method) {
    case OptimizerMethod::Cobyla: return cobyla_minimize(f, std::move(x0), config);
    case OptimizerMethod::NelderMead: return nelder_mead_minimize(f, std::move(x0), config);
  }
  throw ConfigError("unknown optimizer");
}

std::vector<double> init_params(std::size_t count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("parameter count must be positive");
  Rng rng(seed);
  std::vector<double> theta(count);
  for (auto& t : theta) t = 2.0 * std::numbers::pi * rng.uniform();
  return theta;
}

TrainingObjective::TrainingObjective(const EncodedDataset& data, const AnsatzSpec& spec,
                                     const RegisterLayout& layout, std::vector<double> weights,
                                     SwapTestEvaluation mode, unsigned threads)
    : spec_(spec), layout_(layout), ansatz_(build_ansatz(spec)), mode_(mode), threads_(threads) {
  validate(layout);
  if (data.size() == 0) throw ConfigError("training set is empty");
  if (spec.n_qubits != layout.n) {
    throw ConfigError("ansatz width " + std::to_string(spec.n_qubits) +
                      " differs from AB register size " + std::to_string(layout.n));
  }
  const std::size_t dim = std::size_t{1} << layout.n;
  states_.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.vectors[i].size() != dim) {
      throw ConfigError("sample " + std::to_string(i) + " has length " +
                        std::to_string(data.vectors[i].size()) + ", expected " +
                        std::to_string(dim));
    }
    if (data.labels[i] >= (std::uint64_t{1} << layout.l)) {
      throw ConfigError("label " + std::to_string(data.labels[i]) + " exceeds 2^l - 1");
    }
    states_.push_back(amplitude_encode(data.vectors[i]));
    labels_.push_back(data.labels[i]);
  }
  if (weights.empty()) {
    weights_.assign(data.size(), 1.0 / static_cast<double>(data.size()));
  } else {
    if (weights.size() != data.size()) throw ConfigError("one weight per sample required");
    weights_ = std::move(weights);
  }
}

double TrainingObjective::operator()(std::span<const double> theta) const {
  std::vector<double> per_sample(states_.size());
  parallel_for(
      states_.size(),
      [&](std::size_t i) {
        per_sample[i] =
            swap_test_probability(states_[i], labels_[i], ansatz_, theta, layout_, mode_);
      },
      threads_);
  double cost = 0.0;
  for (std::size_t i = 0; i < per_sample.size(); ++i) cost += weights_[i] * per_sample[i];
  return cost;
}

double training_cost(std::span<const double> theta, const TrainingObjective& objective) {
  return objective(theta);
}

TrainResult train(const EncodedDataset& data, const AnsatzSpec& spec, const RegisterLayout& layout,
                  const OptimizerConfig& config, unsigned threads) {
  validate(config);
  const TrainingObjective objective(data, spec, layout, {}, SwapTestEvaluation::ReferenceOverlap,
                                    threads);
  auto theta0 = init_params(objective.param_count(), config.seed);
  OptimizeResult opt =
      minimize([&](std::span<const double> t) { return objective(t); }, std::move(theta0), config);

  TrainResult result;
  result.theta_star = std::move(opt.x);
  result.cost_history = std::move(opt.history);
  result.evaluations_used = result.cost_history.size();
  result.initial_cost = result.cost_history.front();
  result.final_cost = opt.f;
  result.stop_reason = std::move(opt.stop_reason);
  result.spec = spec;
  result.layout = layout;
  result.optimizer = config;
  result.class_count = data.class_count();
  result.data_seed = data.seed;
  result.dataset_fingerprint = data.fingerprint();
  return result;
}

}  // namespace qae
