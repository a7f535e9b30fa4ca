#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qae/circuits.hpp"
#include "qae/classify.hpp"
#include "qae/expressibility.hpp"
#include "qae/optimize.hpp"

namespace qae {

inline constexpr std::string_view kSchemaVersion = "1.0";

/// Stamped into every emitted document.
struct Provenance {
  std::string tool_version = QAE_VERSION;
  std::string config_hash;
};

nlohmann::json to_json(const AnsatzSpec& spec);
AnsatzSpec ansatz_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RegisterLayout& layout);
RegisterLayout layout_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OptimizerConfig& config);
OptimizerConfig optimizer_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainResult& result, const Provenance& provenance);
TrainResult train_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EvalReport& report, const Provenance& provenance);
nlohmann::json to_json(const ExpressibilityReport& report, const Provenance& provenance);

/// index,truth,predicted,p_0..p_{C-1}
std::string records_csv(const EvalReport& report);

/// Throws FormatError unless `j` carries a schema_version with a known major.
void check_schema(const nlohmann::json& j, std::string_view expected_kind);

/// Pretty JSON with a trailing newline; stable for identical inputs.
std::string dump(const nlohmann::json& j);

}  // namespace qae
