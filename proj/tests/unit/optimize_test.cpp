#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qae/error.hpp"
#include "qae/optimize.hpp"

namespace qae {

void PrintTo(OptimizerMethod method, std::ostream* os) { *os << optimizer_method_name(method); }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

OptimizerConfig budget(std::size_t evals, OptimizerMethod method = OptimizerMethod::Cobyla) {
  OptimizerConfig c;
  c.method = method;
  c.max_evals = evals;
  c.rho_begin = 0.5;
  c.rho_end = 1e-7;
  return c;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

class Minimizers : public ::testing::TestWithParam<OptimizerMethod> {};

TEST_P(Minimizers, OneDimensionalQuadratic) {
  const auto r = minimize([](std::span<const double> t) { return (t[0] - 1.0) * (t[0] - 1.0); },
                          {0.0}, budget(500, GetParam()));
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
}

TEST_P(Minimizers, ShiftedQuadraticRandomCentre) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> c = {4 * rng.uniform() - 2, 4 * rng.uniform() - 2};
    const auto r = minimize([&](std::span<const double> t) { return sq_dist(t, c); }, {0.0, 0.0},
                            budget(2000, GetParam()));
    EXPECT_LE(std::sqrt(sq_dist(r.x, c)), 1e-3);
  }
}

TEST_P(Minimizers, IllConditionedQuadratic) {
  const std::vector<double> c = {0.3, -1.2, 2.0, 0.7, -0.4};
  auto f = [&](std::span<const double> t) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      s += static_cast<double>(i + 1) * (t[i] - c[i]) * (t[i] - c[i]);
    }
    return s;
  };
  const auto r = minimize(f, std::vector<double>(5, 0.0), budget(5000, GetParam()));
  EXPECT_LE(std::sqrt(sq_dist(r.x, c)), 1e-3);
}

TEST_P(Minimizers, BestSoFarAndHistory) {
  Rng rng(12);
  auto f = [](std::span<const double> t) { return std::sin(3 * t[0]) + t[1] * t[1] + 0.1 * t[0] * t[0]; };
  const auto r = minimize(f, {1.0, 1.0}, budget(200, GetParam()));
  ASSERT_FALSE(r.history.empty());
  EXPECT_LE(r.history.size(), 200u);
  EXPECT_EQ(r.f, *std::min_element(r.history.begin(), r.history.end()));
  EXPECT_EQ(f(r.x), r.f);
  double best = r.history.front();
  for (double h : r.history) {
    const double next = std::min(best, h);
    EXPECT_LE(next, best);
    best = next;
  }
}

TEST_P(Minimizers, Deterministic) {
  auto f = [](std::span<const double> t) {
    return std::cos(t[0]) * std::sin(t[1]) + 0.05 * (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
  };
  const auto a = minimize(f, {0.3, 0.2, 0.1}, budget(300, GetParam()));
  const auto b = minimize(f, {0.3, 0.2, 0.1}, budget(300, GetParam()));
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.stop_reason, b.stop_reason);
}

TEST_P(Minimizers, RejectsTinyBudget) {
  auto f = [](std::span<const double> t) { return t[0] * t[0]; };
  EXPECT_THROW(minimize(f, {0.0, 0.0, 0.0}, budget(4, GetParam())), ConfigError);
  EXPECT_NO_THROW(minimize(f, {0.0, 0.0, 0.0}, budget(5, GetParam())));
}

INSTANTIATE_TEST_SUITE_P(Methods, Minimizers,
                         ::testing::Values(OptimizerMethod::Cobyla, OptimizerMethod::NelderMead),
                         [](const auto& info) {
                           return info.param == OptimizerMethod::Cobyla ? "Cobyla" : "NelderMead";
                         });

TEST(Cobyla, StopsOnRadius) {
  const auto r = cobyla_minimize([](std::span<const double> t) { return t[0] * t[0]; }, {1.0},
                                 budget(100000));
  EXPECT_LT(r.history.size(), 100000u);
  EXPECT_NE(r.stop_reason.find("rho"), std::string::npos) << r.stop_reason;
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig c;
  c.rho_end = 2.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = OptimizerConfig{};
  c.max_evals = 0;
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_EQ(optimizer_method_from_name("nelder-mead"), OptimizerMethod::NelderMead);
  EXPECT_THROW(optimizer_method_from_name("bfgs"), ConfigError);
}

TEST(InitParams, Examples) {
  EXPECT_EQ(init_params(10, 3), init_params(10, 3));
  EXPECT_NE(init_params(10, 3), init_params(10, 4));
  const auto p = init_params(168, 1);
  EXPECT_EQ(p.size(), 168u);
  for (double v : p) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, kTwoPi);
  }
  EXPECT_THROW(init_params(0, 1), ConfigError);
}

EncodedDataset make_set(std::vector<std::vector<double>> vectors, std::vector<std::uint32_t> labels,
                        std::vector<int> classes) {
  EncodedDataset d;
  for (auto& v : vectors) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    for (double& x : v) x /= std::sqrt(norm);
  }
  d.vectors = std::move(vectors);
  d.labels = std::move(labels);
  d.classes = std::move(classes);
  for (std::size_t i = 0; i < d.labels.size(); ++i) d.source_indices.push_back(i);
  return d;
}

std::vector<double> basis(std::size_t dim, std::size_t i) {
  std::vector<double> v(dim, 0.0);
  v[i] = 1.0;
  return v;
}

TEST(TrainingCost, IdentityWithMatchingTrash) {
  const auto layout = RegisterLayout::make(4, 3);
  const AnsatzSpec spec{1, ArbitraryGate::None, 0, 4};
  // Indices 0 and 8 both leave the low three (trash) bits at 000.
  const auto data = make_set({basis(16, 0), basis(16, 8)}, {0, 0}, {0});
  const TrainingObjective obj(data, spec, layout);
  EXPECT_NEAR(training_cost(std::vector<double>(4, 0.0), obj), 0.0, 1e-12);
}

TEST(TrainingCost, OrthogonalTrashAndReference) {
  const auto layout = RegisterLayout::make(4, 3);
  const AnsatzSpec spec{1, ArbitraryGate::None, 0, 4};
  const auto data = make_set({basis(16, 0)}, {7}, {0, 1, 2, 3, 4, 5, 6, 7});
  const TrainingObjective obj(data, spec, layout);
  EXPECT_NEAR(training_cost(std::vector<double>(4, 0.0), obj), 0.5, 1e-12);
}

EncodedDataset random_set(std::size_t count, int n, int l, Rng& rng) {
  std::vector<std::vector<double>> v;
  std::vector<std::uint32_t> y;
  const std::uint64_t classes = std::uint64_t{1} << l;
  for (std::size_t i = 0; i < count; ++i) {
    v.push_back(testing::random_real_vector(std::size_t{1} << n, rng, true));
    y.push_back(static_cast<std::uint32_t>(rng.below(classes)));
  }
  std::vector<int> cls;
  for (std::uint64_t c = 0; c < classes; ++c) cls.push_back(static_cast<int>(c));
  return make_set(std::move(v), std::move(y), std::move(cls));
}

TEST(TrainingCost, RangeForRandomParameters) {
  Rng rng(7);
  const auto layout = RegisterLayout::make(5, 2);
  const auto data = random_set(12, 5, 2, rng);
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = testing::random_spec(5, rng, 3);
    const TrainingObjective obj(data, spec, layout);
    const double c = obj(testing::random_angles(obj.param_count(), rng));
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 0.5 + 1e-9);
  }
}

TEST(TrainingCost, EvaluationModesAgree) {
  Rng rng(71);
  const auto layout = RegisterLayout::make(4, 2);
  const auto data = random_set(10, 4, 2, rng);
  const AnsatzSpec spec{6, ArbitraryGate::RZ, 2, 4};
  const TrainingObjective fast(data, spec, layout, {}, SwapTestEvaluation::ReferenceOverlap);
  const TrainingObjective full(data, spec, layout, {}, SwapTestEvaluation::FullCircuit);
  const auto theta = testing::random_angles(fast.param_count(), rng);
  EXPECT_NEAR(fast(theta), full(theta), 1e-12);
}

TEST(TrainingCost, PermutationInvariance) {
  Rng rng(72);
  const auto layout = RegisterLayout::make(5, 2);
  auto data = random_set(16, 5, 2, rng);
  std::vector<double> weights(16);
  for (auto& w : weights) w = rng.uniform();
  const AnsatzSpec spec{3, ArbitraryGate::None, 2, 5};
  const auto theta = testing::random_angles(ansatz_param_count(spec), rng);
  const double before = TrainingObjective(data, spec, layout, weights)(theta);

  std::vector<std::size_t> perm(16);
  for (std::size_t i = 0; i < 16; ++i) perm[i] = i;
  rng.shuffle(perm.begin(), perm.end());
  EncodedDataset shuffled = data;
  std::vector<double> shuffled_w(16);
  for (std::size_t i = 0; i < 16; ++i) {
    shuffled.vectors[i] = data.vectors[perm[i]];
    shuffled.labels[i] = data.labels[perm[i]];
    shuffled_w[i] = weights[perm[i]];
  }
  EXPECT_NEAR(TrainingObjective(shuffled, spec, layout, shuffled_w)(theta), before, 1e-12);
}

TEST(TrainingCost, ThreadCountDoesNotChangeBits) {
  Rng rng(73);
  const auto layout = RegisterLayout::make(6, 2);
  const auto data = random_set(37, 6, 2, rng);
  const AnsatzSpec spec{3, ArbitraryGate::None, 3, 6};
  const auto theta = testing::random_angles(ansatz_param_count(spec), rng);
  const double one = TrainingObjective(data, spec, layout, {}, SwapTestEvaluation::ReferenceOverlap, 1)(theta);
  for (unsigned t : {2u, 3u, 8u}) {
    EXPECT_EQ(TrainingObjective(data, spec, layout, {}, SwapTestEvaluation::ReferenceOverlap, t)(theta), one);
  }
}

TEST(TrainingCost, Errors) {
  const auto layout = RegisterLayout::make(4, 3);
  const AnsatzSpec spec{1, ArbitraryGate::None, 0, 4};
  EXPECT_THROW(TrainingObjective(EncodedDataset{}, spec, layout), ConfigError);
  const auto data = make_set({basis(8, 0)}, {0}, {0});
  EXPECT_THROW(TrainingObjective(data, spec, layout), ConfigError);
}

// 2-qubit AB register, one trash qubit; classes differ in the sign of the
// first amplitude.
EncodedDataset sign_pattern_set(Rng& rng) {
  std::vector<std::vector<double>> v;
  std::vector<std::uint32_t> y;
  for (int i = 0; i < 20; ++i) {
    const std::uint32_t label = static_cast<std::uint32_t>(i % 2);
    std::vector<double> x = {0.6 + 0.3 * rng.uniform(), 0.2 * rng.uniform(), 0.5 * rng.uniform(),
                             0.2 * rng.uniform()};
    if (label == 1) x[0] = -x[0];
    v.push_back(x);
    y.push_back(label);
  }
  return make_set(std::move(v), std::move(y), {0, 1});
}

TEST(Train, ToyProblemDescends) {
  Rng rng(81);
  const auto data = sign_pattern_set(rng);
  const auto layout = RegisterLayout::make(2, 1);
  const AnsatzSpec spec{3, ArbitraryGate::None, 2, 2};
  OptimizerConfig cfg = budget(300);
  cfg.seed = 5;
  const TrainResult r = train(data, spec, layout, cfg, 1);
  EXPECT_LT(r.final_cost, r.initial_cost);
  EXPECT_LE(r.cost_history.size(), 300u);
  EXPECT_EQ(r.evaluations_used, r.cost_history.size());
  EXPECT_EQ(r.theta_star.size(), ansatz_param_count(spec));
  for (double c : r.cost_history) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 0.5 + 1e-9);
  }
  EXPECT_EQ(r.initial_cost, r.cost_history.front());
  EXPECT_EQ(r.final_cost, *std::min_element(r.cost_history.begin(), r.cost_history.end()));
}

TEST(Train, DeterministicAcrossRunsAndThreads) {
  Rng rng(82);
  const auto data = sign_pattern_set(rng);
  const auto layout = RegisterLayout::make(2, 1);
  const AnsatzSpec spec{3, ArbitraryGate::None, 2, 2};
  OptimizerConfig cfg = budget(150);
  cfg.seed = 9;
  const TrainResult a = train(data, spec, layout, cfg, 1);
  const TrainResult b = train(data, spec, layout, cfg, 4);
  EXPECT_EQ(a.theta_star, b.theta_star);
  EXPECT_EQ(a.cost_history, b.cost_history);
  EXPECT_EQ(a.dataset_fingerprint, b.dataset_fingerprint);
}

}  // namespace
}  // namespace qae
