#include "config.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "qae/hash.hpp"

namespace qae::cli {
namespace {

using nlohmann::json;

const json& field(const json& doc, const std::string& path) {
  const json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (!node->is_object() || !node->contains(key)) {
      throw ValidationError(path, "missing");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) return *node;
    start = dot + 1;
  }
}

std::int64_t get_int(const json& doc, const std::string& path, std::int64_t lo, std::int64_t hi) {
  const json& v = field(doc, path);
  if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
  const auto value = v.get<std::int64_t>();
  if (value < lo || value > hi) {
    throw ValidationError(path, "must lie in [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "], got " + std::to_string(value));
  }
  return value;
}

std::uint64_t get_seed(const json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                 v.get<std::int64_t>() < 0)) {
    throw ValidationError(path, "expected a non-negative integer seed");
  }
  return v.get<std::uint64_t>();
}

double get_positive(const json& doc, const std::string& path) {
  const json& v = field(doc, path);
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  const double value = v.get<double>();
  if (!(value > 0.0) || !std::isfinite(value)) throw ValidationError(path, "must be positive");
  return value;
}

std::string get_string(const json& doc, const std::string& path) {
  const json& v = field(doc, path);
  if (!v.is_string()) throw ValidationError(path, "expected a string");
  return v.get<std::string>();
}

std::filesystem::path resolve_data_path(const std::string& configured) {
  std::filesystem::path p(configured);
  if (p.is_absolute()) return p;
  if (const char* env = std::getenv(kDataDirEnv); env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / p;
  }
  return std::filesystem::path(QAE_DEFAULT_DATA_DIR) / p;
}

// Runs `fn`, re-tagging any ConfigError it throws with `path`.
template <typename Fn>
auto tagged(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ValidationError(path, e.what());
  }
}

void merge_into(json& base, const json& patch, const std::string& prefix) {
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ValidationError(path, "unknown key");
    json& target = base[key];
    if (target.is_object() && value.is_object()) {
      merge_into(target, value, path);
    } else {
      target = value;
    }
  }
}

}  // namespace

json default_config() {
  return json{
      {"data",
       {{"images", "mnist5k/images-idx3-ubyte.gz"},
        {"labels", "mnist5k/labels-idx1-ubyte.gz"},
        {"classes", {0, 1, 2, 3}},
        {"n_train", 500},
        {"n_test", 500},
        {"image_side", 16},
        {"seed", 1}}},
      {"ansatz", {{"circuit", 3}, {"gate", "none"}, {"repetitions", 20}}},
      {"layout", {{"trash_qubits", 3}}},
      {"optimizer",
       {{"method", "cobyla"},
        {"max_evals", 5000},
        {"rho_begin", 1.0},
        {"rho_end", 1e-6},
        {"seed", 1}}},
      {"prediction", {{"argmax_domain", "assigned-classes"}}},
      {"expressibility", {{"n_inputs", 2000}, {"bins", 75}, {"seeds", {0, 1, 2, 3, 4}}}},
      {"threads", 1},
      {"out", "runs/default"},
  };
}

void apply_override(json& document, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError(assignment, "override must look like key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json* node = &document;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (!node->is_object() || !node->contains(key)) throw ValidationError(path, "unknown key");
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded() || (node->is_string() && !value.is_string())) value = text;
  *node = std::move(value);
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config", "cannot open " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ValidationError("--config", path.string() + " is not a JSON object");
  }
  // A run manifest carries the full config it was produced from.
  if (doc.contains("kind") && doc["kind"] == "qae-run-manifest" && doc.contains("config")) {
    doc = json(doc["config"]);
  }
  // Partial files are merged over the defaults; unknown keys are errors.
  json merged = default_config();
  merge_into(merged, doc, "");
  return merged;
}

RunConfig resolve_config(const json& document, bool check_files) {
  RunConfig cfg;
  cfg.document = document;

  cfg.images_path = resolve_data_path(get_string(document, "data.images"));
  cfg.labels_path = resolve_data_path(get_string(document, "data.labels"));
  if (check_files) {
    if (!std::filesystem::exists(cfg.images_path)) {
      throw ValidationError("data.images", "file not found: " + cfg.images_path.string());
    }
    if (!std::filesystem::exists(cfg.labels_path)) {
      throw ValidationError("data.labels", "file not found: " + cfg.labels_path.string());
    }
  }

  const json& classes = field(document, "data.classes");
  if (!classes.is_array() || classes.empty()) {
    throw ValidationError("data.classes", "expected a non-empty array of digits");
  }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string path = "data.classes." + std::to_string(i);
    if (!classes[i].is_number_integer()) throw ValidationError(path, "expected an integer");
    const int c = classes[i].get<int>();
    if (c < 0 || c > 255) throw ValidationError(path, "class label out of range");
    for (int prev : cfg.classes) {
      if (prev == c) throw ValidationError(path, "duplicate class " + std::to_string(c));
    }
    cfg.classes.push_back(c);
  }

  cfg.n_train = static_cast<std::size_t>(get_int(document, "data.n_train", 1, 1 << 24));
  cfg.n_test = static_cast<std::size_t>(get_int(document, "data.n_test", 1, 1 << 24));
  cfg.image_side = static_cast<int>(get_int(document, "data.image_side", 2, 4096));
  cfg.data_seed = get_seed(field(document, "data.seed"), "data.seed");

  const auto side = static_cast<std::uint64_t>(cfg.image_side);
  const std::uint64_t pixels = side * side;
  if (!std::has_single_bit(pixels)) {
    throw ValidationError("data.image_side", "image_side^2 must be a power of two");
  }
  const int n = std::countr_zero(pixels);
  if (n > 20) throw ValidationError("data.image_side", "image too large to simulate");

  cfg.ansatz.circuit_id = static_cast<int>(get_int(document, "ansatz.circuit", 1, 7));
  cfg.ansatz.gate = tagged("ansatz.gate", [&] {
    return arbitrary_gate_from_name(get_string(document, "ansatz.gate"));
  });
  cfg.ansatz.repetitions = static_cast<int>(get_int(document, "ansatz.repetitions", 1, 100000));
  cfg.ansatz.n_qubits = n;
  tagged("ansatz", [&] { validate(cfg.ansatz); });

  const int l = static_cast<int>(get_int(document, "layout.trash_qubits", 1, n - 1));
  cfg.layout = RegisterLayout{n, l};
  tagged("layout", [&] { validate(cfg.layout); });
  if (cfg.classes.size() > (std::size_t{1} << l)) {
    throw ValidationError("layout.trash_qubits",
                          std::to_string(cfg.classes.size()) + " classes need at least " +
                              std::to_string(std::bit_width(cfg.classes.size() - 1)) +
                              " trash qubits, got " + std::to_string(l));
  }

  cfg.optimizer.method = tagged("optimizer.method", [&] {
    return optimizer_method_from_name(get_string(document, "optimizer.method"));
  });
  cfg.optimizer.max_evals =
      static_cast<std::size_t>(get_int(document, "optimizer.max_evals", 1, 100000000));
  cfg.optimizer.rho_begin = get_positive(document, "optimizer.rho_begin");
  cfg.optimizer.rho_end = get_positive(document, "optimizer.rho_end");
  cfg.optimizer.seed = get_seed(field(document, "optimizer.seed"), "optimizer.seed");
  tagged("optimizer", [&] { validate(cfg.optimizer); });
  const std::size_t dim = ansatz_param_count(cfg.ansatz);
  if (cfg.optimizer.max_evals < dim + 2) {
    throw ValidationError("optimizer.max_evals",
                          "must be at least parameter count + 2 = " + std::to_string(dim + 2));
  }

  cfg.argmax_domain = tagged("prediction.argmax_domain", [&] {
    return argmax_domain_from_name(get_string(document, "prediction.argmax_domain"));
  });

  cfg.expr_inputs =
      static_cast<std::size_t>(get_int(document, "expressibility.n_inputs", 2, 10000000));
  if (cfg.expr_inputs % 2 != 0) {
    throw ValidationError("expressibility.n_inputs", "must be even (inputs are paired)");
  }
  if (cfg.expr_inputs / 2 < kMinFidelitySamples) {
    throw ValidationError("expressibility.n_inputs",
                          "yields fewer than " + std::to_string(kMinFidelitySamples) +
                              " fidelity samples");
  }
  cfg.expr_bins = static_cast<std::size_t>(get_int(document, "expressibility.bins", 1, 100000));
  const json& seeds = field(document, "expressibility.seeds");
  if (!seeds.is_array() || seeds.empty()) {
    throw ValidationError("expressibility.seeds", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    cfg.expr_seeds.push_back(get_seed(seeds[i], "expressibility.seeds." + std::to_string(i)));
  }

  cfg.threads = static_cast<unsigned>(get_int(document, "threads", 1, 1024));
  cfg.out_dir = get_string(document, "out");
  if (cfg.out_dir.empty()) throw ValidationError("out", "must not be empty");
  return cfg;
}

std::string RunConfig::config_hash() const {
  json hashed = document;
  hashed.erase("threads");
  hashed.erase("out");
  return sha256_hex(hashed.dump());
}

}  // namespace qae::cli
