#include <algorithm>
#include <numeric>

#include "qae/error.hpp"
#include "qae/optimize.hpp"

namespace qae {

OptimizeResult nelder_mead_minimize(const Objective& f, std::vector<double> x0,
                                    const OptimizerConfig& config) {
  validate(config);
  const std::size_t n = x0.size();
  if (n == 0) throw ConfigError("cannot optimise over zero parameters");
  if (config.max_evals < n + 2) {
    throw ConfigError("max_evals " + std::to_string(config.max_evals) +
                      " is below dim + 2 = " + std::to_string(n + 2));
  }

  OptimizeResult result;
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    result.history.push_back(v);
    if (result.x.empty() || v < result.f) {
      result.f = v;
      result.x = x;
    }
    return v;
  };
  auto budget_left = [&] { return result.history.size() < config.max_evals; };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  fv[0] = eval(simplex[0]);
  for (std::size_t j = 0; j < n; ++j) {
    simplex[j + 1][j] += config.rho_begin;
    fv[j + 1] = eval(simplex[j + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  auto affine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double size = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        size = std::max(size, std::abs(simplex[j][i] - simplex[best][i]));
      }
    }
    if (size <= config.rho_end) {
      result.stop_reason = "simplex size below rho_end";
      return result;
    }
    if (!budget_left()) {
      result.stop_reason = "max_evals";
      return result;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t j = 0; j <= n; ++j) {
      if (j == worst) continue;
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[j][i] / static_cast<double>(n);
    }

    const auto reflected = affine(centroid, simplex[worst], -1.0);
    const double fr = eval(reflected);
    if (fr < fv[best]) {
      if (!budget_left()) {
        simplex[worst] = reflected;
        fv[worst] = fr;
        continue;
      }
      const auto expanded = affine(centroid, simplex[worst], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        fv[worst] = fe;
      } else {
        simplex[worst] = reflected;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = reflected;
      fv[worst] = fr;
      continue;
    }
    if (!budget_left()) continue;
    const bool outside = fr < fv[worst];
    const auto contracted = outside ? affine(centroid, reflected, 0.5)
                                    : affine(centroid, simplex[worst], 0.5);
    const double fc = eval(contracted);
    if (fc < std::min(fr, fv[worst])) {
      simplex[worst] = contracted;
      fv[worst] = fc;
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t j = 0; j <= n && budget_left(); ++j) {
      if (j == best) continue;
      simplex[j] = affine(simplex[best], simplex[j], 0.5);
      fv[j] = eval(simplex[j]);
    }
  }
}

}  // namespace qae
