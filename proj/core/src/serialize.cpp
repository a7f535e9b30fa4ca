#include "qae/serialize.hpp"

#include <cstdio>
#include <sstream>

#include "qae/error.hpp"

namespace qae {
namespace {

template <typename T>
T require(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

nlohmann::json stamp(std::string_view kind, const Provenance& p) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["tool_version"] = p.tool_version;
  j["config_hash"] = p.config_hash;
  return j;
}

}  // namespace

nlohmann::json to_json(const AnsatzSpec& spec) {
  return {{"circuit", spec.circuit_id},
          {"gate", arbitrary_gate_name(spec.gate)},
          {"repetitions", spec.repetitions},
          {"n_qubits", spec.n_qubits}};
}

AnsatzSpec ansatz_from_json(const nlohmann::json& j) {
  AnsatzSpec spec;
  spec.circuit_id = require<int>(j, "circuit");
  spec.gate = arbitrary_gate_from_name(require<std::string>(j, "gate"));
  spec.repetitions = require<int>(j, "repetitions");
  spec.n_qubits = require<int>(j, "n_qubits");
  validate(spec);
  return spec;
}

nlohmann::json to_json(const RegisterLayout& layout) {
  return {{"n", layout.n}, {"l", layout.l}, {"k", layout.k()}, {"total_qubits", layout.total_qubits()}};
}

RegisterLayout layout_from_json(const nlohmann::json& j) {
  return RegisterLayout::make(require<int>(j, "n"), require<int>(j, "l"));
}

nlohmann::json to_json(const OptimizerConfig& config) {
  return {{"method", optimizer_method_name(config.method)},
          {"max_evals", config.max_evals},
          {"rho_begin", config.rho_begin},
          {"rho_end", config.rho_end},
          {"seed", config.seed}};
}

OptimizerConfig optimizer_from_json(const nlohmann::json& j) {
  OptimizerConfig c;
  c.method = optimizer_method_from_name(require<std::string>(j, "method"));
  c.max_evals = require<std::size_t>(j, "max_evals");
  c.rho_begin = require<double>(j, "rho_begin");
  c.rho_end = require<double>(j, "rho_end");
  c.seed = require<std::uint64_t>(j, "seed");
  validate(c);
  return c;
}

nlohmann::json to_json(const TrainResult& r, const Provenance& provenance) {
  auto j = stamp("qae-model", provenance);
  j["ansatz"] = to_json(r.spec);
  j["layout"] = to_json(r.layout);
  j["optimizer"] = to_json(r.optimizer);
  j["seeds"] = {{"params", r.optimizer.seed}, {"data", r.data_seed}};
  j["class_count"] = r.class_count;
  j["dataset_fingerprint"] = r.dataset_fingerprint;
  j["evaluations_used"] = r.evaluations_used;
  j["initial_cost"] = r.initial_cost;
  j["final_cost"] = r.final_cost;
  j["stop_reason"] = r.stop_reason;
  j["theta_star"] = r.theta_star;
  j["cost_history"] = r.cost_history;
  return j;
}

TrainResult train_result_from_json(const nlohmann::json& j) {
  check_schema(j, "qae-model");
  TrainResult r;
  r.spec = ansatz_from_json(require<nlohmann::json>(j, "ansatz"));
  r.layout = layout_from_json(require<nlohmann::json>(j, "layout"));
  r.optimizer = optimizer_from_json(require<nlohmann::json>(j, "optimizer"));
  const auto seeds = require<nlohmann::json>(j, "seeds");
  r.data_seed = require<std::uint64_t>(seeds, "data");
  r.class_count = require<std::size_t>(j, "class_count");
  r.dataset_fingerprint = require<std::string>(j, "dataset_fingerprint");
  r.evaluations_used = require<std::size_t>(j, "evaluations_used");
  r.initial_cost = require<double>(j, "initial_cost");
  r.final_cost = require<double>(j, "final_cost");
  r.stop_reason = require<std::string>(j, "stop_reason");
  r.theta_star = require<std::vector<double>>(j, "theta_star");
  r.cost_history = require<std::vector<double>>(j, "cost_history");
  if (r.theta_star.size() != ansatz_param_count(r.spec)) {
    throw FormatError("theta_star length does not match the stored ansatz");
  }
  return r;
}

nlohmann::json to_json(const EvalReport& report, const Provenance& provenance) {
  auto j = stamp("qae-eval-report", provenance);
  j["n_samples"] = report.records.size();
  j["class_count"] = report.class_count;
  j["accuracy"] = report.accuracy;
  j["log_loss"] = report.log_loss;
  j["per_class_accuracy"] = report.per_class_accuracy;
  std::vector<std::size_t> flat;
  for (const auto& row : report.confusion) flat.insert(flat.end(), row.begin(), row.end());
  j["confusion"] = flat;
  j["unassigned"] = report.unassigned;
  return j;
}

nlohmann::json to_json(const ExpressibilityReport& report, const Provenance& provenance) {
  auto j = stamp("qae-expressibility", provenance);
  j["ansatz"] = to_json(report.spec);
  j["seed"] = report.seed;
  j["n_samples"] = report.n_samples;
  j["n_bins"] = report.n_bins;
  j["d_kl"] = report.d_kl;
  j["empirical"] = report.empirical;
  j["haar"] = report.haar;
  return j;
}

std::string records_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "index,truth,predicted";
  for (std::size_t c = 0; c < report.class_count; ++c) out << ",p_" << c;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    out << i << ',' << r.truth << ',' << r.predicted;
    for (double p : r.class_probs) {
      std::snprintf(buf, sizeof buf, "%.17g", p);
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

void check_schema(const nlohmann::json& j, std::string_view expected_kind) {
  if (!j.is_object() || !j.contains("schema_version")) {
    throw FormatError("document has no schema_version");
  }
  const auto version = j.at("schema_version").get<std::string>();
  const auto major = version.substr(0, version.find('.'));
  const auto known = std::string(kSchemaVersion.substr(0, kSchemaVersion.find('.')));
  if (major != known) {
    throw FormatError("unsupported schema version " + version + " (expected " + known + ".x)");
  }
  if (j.value("kind", "") != expected_kind) {
    throw FormatError("expected a '" + std::string(expected_kind) + "' document");
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace qae
