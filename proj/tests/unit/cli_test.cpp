#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "app.hpp"
#include "config.hpp"
#include "fixtures.hpp"
#include "qae/serialize.hpp"

namespace qae::cli {
namespace {

using qae::testing::TempDir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Synthetic IDX pair with four well-separated classes on a 16x16 grid.
class CliFixture : public ::testing::Test {
 protected:
  CliFixture() : dir_("cli") {
    const auto raw = qae::testing::synthetic_digits(8, 40, 16, 99);
    qae::testing::write_gzip(dir_ / "img.gz", qae::testing::idx_image_bytes(raw));
    qae::testing::write_gzip(dir_ / "lbl.gz", qae::testing::idx_label_bytes(raw));
  }

  // Small 2-class run on 8x8 images.
  std::vector<std::string> base(const std::string& cmd, const std::string& out) const {
    return {cmd,
            "--set", "data.images=" + (dir_ / "img.gz").string(),
            "--set", "data.labels=" + (dir_ / "lbl.gz").string(),
            "--set", "data.classes=[0,1]",
            "--set", "data.n_train=16",
            "--set", "data.n_test=12",
            "--set", "data.image_side=8",
            "--set", "layout.trash_qubits=1",
            "--set", "ansatz.repetitions=2",
            "--set", "optimizer.max_evals=80",
            "--out", (dir_ / out).string()};
  }

  static std::vector<std::string> with(std::vector<std::string> args,
                                       std::initializer_list<std::string> extra) {
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  }

  TempDir dir_;
};

TEST(Config, DefaultsResolve) {
  const auto cfg = resolve_config(default_config(), false);
  EXPECT_EQ(cfg.ansatz.n_qubits, 8);
  EXPECT_EQ(cfg.layout.l, 3);
  EXPECT_EQ(cfg.layout.k(), 5);
  EXPECT_EQ(cfg.optimizer.max_evals, 5000u);
  EXPECT_EQ(ansatz_param_count(cfg.ansatz), 168u);
  EXPECT_EQ(cfg.classes, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Config, OverridesByDottedPath) {
  auto doc = default_config();
  apply_override(doc, "ansatz.gate=RX");
  apply_override(doc, "ansatz.circuit=6");
  apply_override(doc, "ansatz.repetitions=5");
  apply_override(doc, "data.classes=[1,7]");
  apply_override(doc, "out=123");
  const auto cfg = resolve_config(doc, false);
  EXPECT_EQ(cfg.ansatz.gate, ArbitraryGate::RX);
  EXPECT_EQ(cfg.classes, (std::vector<int>{1, 7}));
  EXPECT_EQ(cfg.out_dir, "123");
  EXPECT_THROW(apply_override(doc, "ansatz.depth=3"), ValidationError);
  EXPECT_THROW(apply_override(doc, "noequals"), ValidationError);
}

TEST(Config, ValidationNamesTheField) {
  auto expect_field = [](const std::string& assignment, const std::string& field) {
    auto doc = default_config();
    apply_override(doc, assignment);
    try {
      resolve_config(doc, false);
      ADD_FAILURE() << assignment << " was accepted";
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.field(), field) << e.what();
    }
  };
  expect_field("data.image_side=12", "data.image_side");
  expect_field("ansatz.gate=RY", "ansatz");
  expect_field("optimizer.max_evals=100", "optimizer.max_evals");
  expect_field("optimizer.rho_end=5", "optimizer");
  expect_field("data.n_train=\"many\"", "data.n_train");
  expect_field("expressibility.n_inputs=151", "expressibility.n_inputs");
  expect_field("expressibility.n_inputs=150", "expressibility.n_inputs");
  expect_field("prediction.argmax_domain=best", "prediction.argmax_domain");
  expect_field("data.classes=[0,0]", "data.classes.1");
}

TEST(Config, HashIgnoresExecutionKeys) {
  auto a = resolve_config(default_config(), false);
  auto doc = default_config();
  apply_override(doc, "threads=8");
  apply_override(doc, "out=elsewhere");
  EXPECT_EQ(resolve_config(doc, false).config_hash(), a.config_hash());
  apply_override(doc, "data.seed=2");
  EXPECT_NE(resolve_config(doc, false).config_hash(), a.config_hash());
}

TEST(Cli, CensusMatchesTables) {
  const auto r = run_cli({"census"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) rows += line.find(" ok") != std::string::npos ? 1 : 0;
  EXPECT_EQ(rows, 11);
  EXPECT_EQ(run_census().mismatches, 0u);
  EXPECT_EQ(census_expectations().size(), 11u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, kExitValidation);
  EXPECT_EQ(run_cli({"train", "--threads", "0"}).code, kExitValidation);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitValidation);
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST_F(CliFixture, TooManyClassesForTrashRegister) {
  const auto r = run_cli(with(base("train", "bad"), {"--set", "data.classes=[0,1,2,3,4,5,6,7]",
                                                     "--set", "layout.trash_qubits=2"}));
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("layout.trash_qubits"), std::string::npos) << r.err;
}

TEST_F(CliFixture, MissingAndCorruptData) {
  EXPECT_EQ(run_cli(with(base("train", "x"), {"--set", "data.images=/nonexistent/img"})).code,
            kExitValidation);
  qae::testing::write_bytes(dir_ / "junk", {1, 2, 3, 4, 5, 6, 7, 8});
  EXPECT_EQ(run_cli(with(base("train", "x"), {"--set", "data.images=" + (dir_ / "junk").string()})).code,
            kExitData);
}

TEST_F(CliFixture, TrainEvalPcaRoundTrip) {
  const auto t = run_cli(base("train", "run"));
  ASSERT_EQ(t.code, kExitOk) << t.err;
  const auto model = nlohmann::json::parse(slurp(dir_ / "run" / "model.json"));
  EXPECT_EQ(model["kind"], "qae-model");
  EXPECT_EQ(model["theta_star"].size(), 18u);  // circuit 3, n = 6, M = 2
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "run" / "manifest.json"));
  EXPECT_EQ(manifest["config_hash"], model["config_hash"]);
  EXPECT_TRUE(manifest.contains("wall_clock_seconds"));

  const auto e = run_cli(base("eval", "run"));
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const auto report = nlohmann::json::parse(slurp(dir_ / "run" / "report.json"));
  EXPECT_EQ(report["tool_version"], QAE_VERSION);
  EXPECT_EQ(report["config_hash"], model["config_hash"]);

  // Accuracy recomputed from the CSV records.
  std::istringstream csv(slurp(dir_ / "run" / "records.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0, correct = 0;
  while (std::getline(csv, line)) {
    std::istringstream f(line);
    std::string idx, truth, pred;
    std::getline(f, idx, ',');
    std::getline(f, truth, ',');
    std::getline(f, pred, ',');
    ++rows;
    correct += truth == pred ? 1 : 0;
  }
  EXPECT_EQ(rows, 12);
  EXPECT_DOUBLE_EQ(report["accuracy"].get<double>(), static_cast<double>(correct) / rows);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "run" / "confusion.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "run" / "confusion.svg"));

  const auto p = run_cli(base("pca", "run"));
  ASSERT_EQ(p.code, kExitOk) << p.err;
  std::istringstream pca(slurp(dir_ / "run" / "pca.csv"));
  std::istringstream recs(slurp(dir_ / "run" / "records.csv"));
  std::getline(pca, line);
  EXPECT_EQ(line, "index,pc1,pc2,truth,predicted,correct");
  std::string rec;
  std::getline(recs, rec);
  int pca_rows = 0;
  while (std::getline(pca, line) && std::getline(recs, rec)) {
    std::vector<std::string> a, b;
    std::string cell;
    for (std::istringstream s(line); std::getline(s, cell, ',');) a.push_back(cell);
    for (std::istringstream s(rec); std::getline(s, cell, ',');) b.push_back(cell);
    EXPECT_EQ(a[3], b[1]);
    EXPECT_EQ(a[4], b[2]);
    EXPECT_EQ(a[5], b[1] == b[2] ? "1" : "0");
    ++pca_rows;
  }
  EXPECT_EQ(pca_rows, 12);
}

TEST_F(CliFixture, EvalRejectsMismatchedModel) {
  ASSERT_EQ(run_cli(base("train", "mm")).code, kExitOk);
  const auto r = run_cli(with(base("eval", "mm"), {"--set", "ansatz.repetitions=3"}));
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("ansatz"), std::string::npos);
  EXPECT_EQ(run_cli(with(base("eval", "mm"), {"--model", (dir_ / "none.json").string()})).code,
            kExitData);
}

TEST_F(CliFixture, RerunAndThreadCountGiveIdenticalBytes) {
  ASSERT_EQ(run_cli(with(base("train", "a"), {"--threads", "1"})).code, kExitOk);
  ASSERT_EQ(run_cli(with(base("train", "b"), {"--threads", "1"})).code, kExitOk);
  ASSERT_EQ(run_cli(with(base("train", "c"), {"--threads", "4"})).code, kExitOk);
  const auto a = slurp(dir_ / "a" / "model.json");
  EXPECT_EQ(a, slurp(dir_ / "b" / "model.json"));
  EXPECT_EQ(a, slurp(dir_ / "c" / "model.json"));
  ASSERT_EQ(run_cli(with(base("eval", "a"), {"--threads", "1"})).code, kExitOk);
  ASSERT_EQ(run_cli(with(base("eval", "c"), {"--threads", "4"})).code, kExitOk);
  EXPECT_EQ(slurp(dir_ / "a" / "report.json"), slurp(dir_ / "c" / "report.json"));
  EXPECT_EQ(slurp(dir_ / "a" / "records.csv"), slurp(dir_ / "c" / "records.csv"));
}

TEST_F(CliFixture, ManifestReexecutesTheRun) {
  ASSERT_EQ(run_cli(base("train", "m1")).code, kExitOk);
  const auto r = run_cli({"train", "--config", (dir_ / "m1" / "manifest.json").string(), "--out",
                          (dir_ / "m2").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(dir_ / "m1" / "model.json"), slurp(dir_ / "m2" / "model.json"));
}

TEST_F(CliFixture, PartialConfigFile) {
  std::ofstream(dir_ / "cfg.json") << R"({"ansatz": {"circuit": 2}, "optimizer": {"max_evals": 60}})";
  auto args = base("train", "cfg");
  args.insert(args.begin() + 1, {"--config", (dir_ / "cfg.json").string()});
  // Later --set flags win over the file.
  ASSERT_EQ(run_cli(args).code, kExitOk);
  const auto model = nlohmann::json::parse(slurp(dir_ / "cfg" / "model.json"));
  EXPECT_EQ(model["ansatz"]["circuit"], 2);
  EXPECT_EQ(model["optimizer"]["max_evals"], 80);

  std::ofstream(dir_ / "bad.json") << R"({"ansatz": {"circuits": 2}})";
  EXPECT_EQ(run_cli({"train", "--config", (dir_ / "bad.json").string()}).code, kExitValidation);
}

TEST_F(CliFixture, EightClassReportHasFullConfusion) {
  const auto args = with(base("train", "eight"),
                         {"--set", "data.classes=[0,1,2,3,4,5,6,7]", "--set", "layout.trash_qubits=3",
                          "--set", "data.n_train=16", "--set", "data.n_test=16"});
  ASSERT_EQ(run_cli(args).code, kExitOk);
  auto eval_args = args;
  eval_args[0] = "eval";
  ASSERT_EQ(run_cli(eval_args).code, kExitOk);
  const auto report = nlohmann::json::parse(slurp(dir_ / "eight" / "report.json"));
  EXPECT_EQ(report["confusion"].size(), 64u);
  EXPECT_EQ(report["class_count"], 8);
}

TEST_F(CliFixture, TableOneShapeHas168Parameters) {
  const auto r = run_cli(with(base("train", "t1"),
                              {"--set", "data.image_side=16", "--set", "layout.trash_qubits=3",
                               "--set", "data.classes=[0,1,2,3]", "--set", "ansatz.repetitions=20",
                               "--set", "data.n_train=4", "--set", "optimizer.max_evals=170"}));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto model = nlohmann::json::parse(slurp(dir_ / "t1" / "model.json"));
  EXPECT_EQ(model["theta_star"].size(), 168u);
}

TEST(CliExpressibility, DeterministicAndOrdered) {
  TempDir dir("expr");
  auto run_expr = [&](const std::string& out, std::initializer_list<std::string> extra) {
    std::vector<std::string> args = {"expressibility", "--out", (dir / out).string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return run_cli(args);
  };
  ASSERT_EQ(run_expr("c3a", {}).code, kExitOk);
  ASSERT_EQ(run_expr("c3b", {}).code, kExitOk);
  ASSERT_EQ(run_expr("c4", {"--set", "ansatz.circuit=4", "--set", "ansatz.repetitions=6"}).code,
            kExitOk);
  const auto a = slurp(dir / "c3a" / "expressibility.json");
  EXPECT_EQ(a, slurp(dir / "c3b" / "expressibility.json"));
  const auto c3 = nlohmann::json::parse(a);
  const auto c4 = nlohmann::json::parse(slurp(dir / "c4" / "expressibility.json"));
  EXPECT_EQ(c3["runs"].size(), 5u);
  EXPECT_LT(c3["mean_d_kl"].get<double>(), c4["mean_d_kl"].get<double>());

  EXPECT_EQ(run_expr("small", {"--set", "expressibility.n_inputs=198"}).code, kExitValidation);
  ASSERT_EQ(run_expr("dump", {"--set", "expressibility.seeds=[3]", "--set",
                              "expressibility.n_inputs=200", "--dump-fidelities"}).code,
            kExitOk);
  EXPECT_TRUE(std::filesystem::exists(dir / "dump" / "fidelities_seed3.csv"));
}

}  // namespace
}  // namespace qae::cli
