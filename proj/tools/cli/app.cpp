#include "app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "qae/data.hpp"
#include "qae/parallel.hpp"
#include "qae/serialize.hpp"
#include "svg.hpp"

namespace qae::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr CensusRow kExpected[] = {
    {1, ArbitraryGate::None, 20, 168, {140, 168, 0}},
    {2, ArbitraryGate::None, 20, 168, {140, 168, 0}},
    {3, ArbitraryGate::None, 20, 168, {160, 168, 0}},
    {4, ArbitraryGate::None, 6, 168, {0, 0, 168}},
    {5, ArbitraryGate::RY, 3, 216, {0, 48, 168}},
    {5, ArbitraryGate::X, 11, 176, {616, 176, 0}},
    {6, ArbitraryGate::RZ, 5, 160, {0, 80, 80}},
    {6, ArbitraryGate::RX, 5, 160, {0, 80, 80}},
    {6, ArbitraryGate::X, 10, 160, {160, 160, 0}},
    {7, ArbitraryGate::RZ, 7, 168, {0, 112, 56}},
    {7, ArbitraryGate::RX, 7, 168, {0, 112, 56}},
};

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("failed writing " + path.string());
}

Provenance provenance(const RunConfig& config) {
  Provenance p;
  p.config_hash = config.config_hash();
  return p;
}

std::pair<EncodedDataset, EncodedDataset> load_splits(const RunConfig& config) {
  const RawDataset raw = load_idx(config.images_path, config.labels_path);
  SubsetConfig subset;
  subset.classes = config.classes;
  subset.n_train = config.n_train;
  subset.n_test = config.n_test;
  subset.side = config.image_side;
  subset.seed = config.data_seed;
  return build_subset(raw, subset);
}

void write_manifest(const fs::path& path, const RunConfig& config, std::string_view command,
                    const json& fingerprints, double seconds,
                    const std::vector<fs::path>& artifacts) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "qae-run-manifest";
  j["tool_version"] = QAE_VERSION;
  j["config_hash"] = config.config_hash();
  j["command"] = command;
  j["config"] = config.document;
  j["dataset_fingerprints"] = fingerprints;
  j["wall_clock_seconds"] = seconds;
  json files = json::array();
  for (const auto& a : artifacts) files.push_back(a.string());
  j["artifacts"] = files;
  write_file(path, dump(j));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string census_table(std::span<const CensusRow> measured) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-9s %-5s %3s %6s %5s %5s %5s %6s  %s\n", "circuit", "gate",
                "M", "params", "cnot", "rot", "crot", "total", "status");
  out << line;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const CensusRow& m = measured[i];
    const CensusRow& e = kExpected[i];
    const bool ok = m.params == e.params && m.census == e.census;
    std::snprintf(line, sizeof line, "%-9d %-5s %3d %6zu %5zu %5zu %5zu %6zu  %s\n", m.circuit,
                  std::string(arbitrary_gate_name(m.gate)).c_str(), m.repetitions, m.params,
                  m.census.cnot, m.census.rotation, m.census.controlled_rotation,
                  m.census.total(), ok ? "ok" : "MISMATCH");
    out << line;
  }
  return out.str();
}

}  // namespace

std::span<const CensusRow> census_expectations() { return kExpected; }

CensusOutcome run_census() {
  CensusOutcome outcome;
  for (const CensusRow& e : kExpected) {
    AnsatzSpec spec{e.circuit, e.gate, e.repetitions, 8};
    const Circuit circuit = build_ansatz(spec);
    CensusRow m = e;
    m.params = circuit.param_count();
    m.census = gate_census(circuit);
    if (m.params != e.params || !(m.census == e.census)) ++outcome.mismatches;
    outcome.measured.push_back(m);
  }
  outcome.table = census_table(outcome.measured);
  return outcome;
}

TrainOutputs cmd_train(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto [train_set, test_set] = load_splits(config);

  TrainOutputs outputs;
  outputs.result = train(train_set, config.ansatz, config.layout, config.optimizer, config.threads);
  outputs.model_path = config.out_dir / "model.json";
  outputs.manifest_path = config.out_dir / "manifest.json";
  write_file(outputs.model_path, dump(to_json(outputs.result, provenance(config))));
  write_manifest(outputs.manifest_path, config, "train",
                 {{"train", train_set.fingerprint()}, {"test", test_set.fingerprint()}},
                 seconds_since(start), {outputs.model_path});
  return outputs;
}

TrainResult load_model(const RunConfig& config, const fs::path& model_path) {
  std::ifstream in(model_path);
  if (!in) throw DataError("cannot open model " + model_path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw FormatError(model_path.string() + " is not valid JSON");
  TrainResult model = train_result_from_json(j);
  if (!(model.spec == config.ansatz)) {
    throw ValidationError("ansatz", "model was trained with a different ansatz");
  }
  if (!(model.layout == config.layout)) {
    throw ValidationError("layout", "model was trained with a different register layout");
  }
  if (model.class_count != config.classes.size()) {
    throw ValidationError("data.classes", "model was trained for " +
                                              std::to_string(model.class_count) + " classes");
  }
  return model;
}

EvalOutputs cmd_eval(const RunConfig& config, const fs::path& model_path) {
  const auto start = std::chrono::steady_clock::now();
  const TrainResult model = load_model(config, model_path);
  const auto [train_set, test_set] = load_splits(config);

  EvalOutputs outputs;
  outputs.report = evaluate(test_set, model.theta_star, config.layout, config.ansatz,
                            config.argmax_domain, config.threads);
  const auto counts = test_set.class_counts();
  for (std::size_t t = 0; t < counts.size(); ++t) {
    const auto& row = outputs.report.confusion[t];
    std::size_t sum = std::accumulate(row.begin(), row.end(), std::size_t{0});
    if (!outputs.report.unassigned.empty()) sum += outputs.report.unassigned[t];
    if (sum != counts[t]) throw ContractError("confusion row sum differs from class count");
  }

  json report = to_json(outputs.report, provenance(config));
  report["classes"] = config.classes;
  report["argmax_domain"] = argmax_domain_name(config.argmax_domain);

  outputs.report_path = config.out_dir / "report.json";
  outputs.records_path = config.out_dir / "records.csv";
  const fs::path text_path = config.out_dir / "confusion.txt";
  const fs::path svg_path = config.out_dir / "confusion.svg";
  write_file(outputs.report_path, dump(report));
  write_file(outputs.records_path, records_csv(outputs.report));
  write_file(text_path, render_confusion_text(outputs.report, config.classes));
  write_file(svg_path, render_confusion_svg(outputs.report, config.classes));
  write_manifest(config.out_dir / "eval_manifest.json", config, "eval",
                 {{"test", test_set.fingerprint()}}, seconds_since(start),
                 {outputs.report_path, outputs.records_path, text_path, svg_path});
  return outputs;
}

ExpressibilityOutputs cmd_expressibility(const RunConfig& config, bool dump_fidelities) {
  const auto start = std::chrono::steady_clock::now();
  const double dimension = std::ldexp(1.0, config.ansatz.n_qubits);
  const Provenance prov = provenance(config);

  ExpressibilityOutputs outputs;
  json runs = json::array();
  std::vector<fs::path> artifacts;
  for (std::uint64_t seed : config.expr_seeds) {
    const auto fids = sample_fidelities(config.ansatz, config.expr_inputs, seed, config.threads);
    ExpressibilityReport rep = kl_divergence(fids, dimension, config.expr_bins);
    rep.spec = config.ansatz;
    rep.seed = seed;
    runs.push_back(to_json(rep, prov));
    outputs.mean_d_kl += rep.d_kl;
    outputs.runs.push_back(std::move(rep));
    if (dump_fidelities) {
      std::ostringstream csv;
      csv << "pair,fidelity\n";
      char buf[40];
      for (std::size_t i = 0; i < fids.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", fids[i]);
        csv << i << ',' << buf << '\n';
      }
      const fs::path p = config.out_dir / ("fidelities_seed" + std::to_string(seed) + ".csv");
      write_file(p, csv.str());
      artifacts.push_back(p);
    }
  }
  outputs.mean_d_kl /= static_cast<double>(outputs.runs.size());

  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "qae-expressibility-summary";
  j["tool_version"] = prov.tool_version;
  j["config_hash"] = prov.config_hash;
  j["ansatz"] = to_json(config.ansatz);
  j["n_inputs"] = config.expr_inputs;
  j["n_bins"] = config.expr_bins;
  j["seeds"] = config.expr_seeds;
  j["mean_d_kl"] = outputs.mean_d_kl;
  j["runs"] = runs;
  outputs.report_path = config.out_dir / "expressibility.json";
  write_file(outputs.report_path, dump(j));
  artifacts.insert(artifacts.begin(), outputs.report_path);
  write_manifest(config.out_dir / "expressibility_manifest.json", config, "expressibility", {},
                 seconds_since(start), artifacts);
  return outputs;
}

PcaOutputs cmd_pca(const RunConfig& config, const fs::path& model_path) {
  const TrainResult model = load_model(config, model_path);
  const auto [train_set, test_set] = load_splits(config);
  const EvalReport report = evaluate(test_set, model.theta_star, config.layout, config.ansatz,
                                     config.argmax_domain, config.threads);
  const PcaProjection pca = pca_project(test_set.vectors, 2);

  std::ostringstream csv;
  csv << "index,pc1,pc2,truth,predicted,correct\n";
  std::vector<std::uint8_t> correct_flags(report.records.size());
  std::vector<std::uint32_t> truth(report.records.size());
  char buf[96];
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    const bool correct = r.predicted == r.truth;
    correct_flags[i] = correct ? 1 : 0;
    truth[i] = r.truth;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", pca.coordinates(static_cast<Eigen::Index>(i), 0),
                  pca.coordinates(static_cast<Eigen::Index>(i), 1));
    csv << i << ',' << buf << ',' << r.truth << ',' << r.predicted << ',' << (correct ? 1 : 0)
        << '\n';
  }
  PcaOutputs outputs;
  outputs.rows = report.records.size();
  outputs.csv_path = config.out_dir / "pca.csv";
  outputs.svg_path = config.out_dir / "pca.svg";
  write_file(outputs.csv_path, csv.str());
  write_file(outputs.svg_path,
             render_pca_svg(pca.coordinates, truth, correct_flags, config.classes));
  return outputs;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum autoencoder image classification"};
  app.name("qae");
  app.require_subcommand(1);
  app.set_version_flag("--version", QAE_VERSION);

  std::string config_path;
  std::vector<std::string> overrides;
  unsigned threads = 0;
  std::string out_dir;
  std::string model_path;
  bool dump_fids = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration or run manifest");
    sub->add_option("--set", overrides, "Override a config leaf: key.path=value")
        ->take_all()
        ->allow_extra_args(false);
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--out", out_dir, "Output directory");
  };
  CLI::App* train_cmd = app.add_subcommand("train", "Train the ansatz and write model.json");
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a model on the test split");
  CLI::App* expr_cmd = app.add_subcommand("expressibility", "KL divergence against Haar");
  CLI::App* census_cmd = app.add_subcommand("census", "Parameter and gate counts of all ansatzes");
  CLI::App* pca_cmd = app.add_subcommand("pca", "2-D PCA of the test split with predictions");
  for (CLI::App* sub : {train_cmd, eval_cmd, expr_cmd, pca_cmd}) common(sub);
  for (CLI::App* sub : {eval_cmd, pca_cmd}) {
    sub->add_option("--model", model_path, "Model file (default <out>/model.json)");
  }
  expr_cmd->add_flag("--dump-fidelities", dump_fids, "Also write per-seed fidelity samples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (census_cmd->parsed()) {
      const CensusOutcome census = run_census();
      out << census.table;
      if (census.mismatches != 0) {
        err << census.mismatches << " census row(s) differ from the published tables\n";
        return kExitInternal;
      }
      return kExitOk;
    }

    json doc = config_path.empty() ? default_config() : load_config_file(config_path);
    for (const auto& o : overrides) apply_override(doc, o);
    if (threads != 0) doc["threads"] = threads;
    if (!out_dir.empty()) doc["out"] = out_dir;
    const RunConfig config = resolve_config(doc);
    set_default_threads(config.threads);
    const fs::path model = model_path.empty() ? config.out_dir / "model.json" : fs::path(model_path);

    if (train_cmd->parsed()) {
      const TrainOutputs o = cmd_train(config);
      out << "params " << o.result.theta_star.size() << "  evals " << o.result.evaluations_used
          << "  cost " << o.result.initial_cost << " -> " << o.result.final_cost << '\n'
          << "wrote " << o.model_path.string() << '\n';
    } else if (eval_cmd->parsed()) {
      const EvalOutputs o = cmd_eval(config, model);
      out << render_confusion_text(o.report, config.classes) << "wrote "
          << o.report_path.string() << '\n';
    } else if (expr_cmd->parsed()) {
      const ExpressibilityOutputs o = cmd_expressibility(config, dump_fids);
      for (const auto& r : o.runs) out << "seed " << r.seed << "  d_kl " << r.d_kl << '\n';
      out << "mean d_kl " << o.mean_d_kl << "\nwrote " << o.report_path.string() << '\n';
    } else if (pca_cmd->parsed()) {
      const PcaOutputs o = cmd_pca(config, model);
      out << o.rows << " rows\nwrote " << o.csv_path.string() << '\n';
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace qae::cli
