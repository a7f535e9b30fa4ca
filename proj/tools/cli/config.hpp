#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qae/circuits.hpp"
#include "qae/classify.hpp"
#include "qae/expressibility.hpp"
#include "qae/error.hpp"
#include "qae/optimize.hpp"

namespace qae::cli {

inline constexpr const char* kDataDirEnv = "QAE_DATA_DIR";

// ConfigError tagged with the dotted path of the offending field.
class ValidationError : public ConfigError {
 public:
  ValidationError(const std::string& field, const std::string& message)
      : ConfigError(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  nlohmann::json document;  // normalised config, every leaf present

  std::filesystem::path images_path;
  std::filesystem::path labels_path;
  std::vector<int> classes;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  int image_side = 16;
  std::uint64_t data_seed = 0;

  AnsatzSpec ansatz;
  RegisterLayout layout;
  OptimizerConfig optimizer;
  ArgmaxDomain argmax_domain = ArgmaxDomain::AssignedClasses;

  std::size_t expr_inputs = 2000;
  std::size_t expr_bins = 75;
  std::vector<std::uint64_t> expr_seeds;

  unsigned threads = 1;
  std::filesystem::path out_dir;

  /// SHA-256 of the config without execution-only keys (threads, out).
  std::string config_hash() const;
};

nlohmann::json default_config();

/// Applies `key.path=value`; value is parsed as JSON when possible and as a
/// string otherwise. Unknown paths are rejected.
void apply_override(nlohmann::json& document, const std::string& assignment);

/// Validates the document and derives typed fields. `check_files` also
/// requires the dataset files to exist.
RunConfig resolve_config(const nlohmann::json& document, bool check_files = true);

nlohmann::json load_config_file(const std::filesystem::path& path);

}  // namespace qae::cli
