#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "qae/error.hpp"
#include "qae/optimize.hpp"

namespace qae {
namespace {

// Simplex acceptability and step-length constants from Powell's COBYLA.
constexpr double kAlpha = 0.25;  // min vertex distance from opposite face, in rho
constexpr double kBeta = 2.1;    // max edge length, in rho
constexpr double kGamma = 0.5;   // geometry step length, in rho
constexpr double kDelta = 1.1;   // edge threshold when choosing the vertex to drop

class Cobyla {
 public:
  Cobyla(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg)
      : f_(f), cfg_(cfg), n_(static_cast<Eigen::Index>(x0.size())),
        pole_(Eigen::Map<const Eigen::VectorXd>(x0.data(), n_)) {}

  OptimizeResult run() {
    double rho = cfg_.rho_begin;
    sim_ = Eigen::MatrixXd::Identity(n_, n_) * rho;
    simi_ = Eigen::MatrixXd::Identity(n_, n_) / rho;
    fvals_.resize(n_);

    f_pole_ = evaluate(pole_);
    for (Eigen::Index j = 0; j < n_; ++j) fvals_(j) = evaluate(pole_ + sim_.col(j));

    bool branch = true;  // false forces a geometry check before the next step
    while (true) {
      if (out_of_budget()) return finish("max_evals");
      switch_pole_to_best();
      if ((simi_ * sim_ - Eigen::MatrixXd::Identity(n_, n_)).cwiseAbs().maxCoeff() > 0.1) {
        return finish("rounding errors in the simplex inverse");
      }

      const Eigen::VectorXd grad = simi_.transpose() * (fvals_.array() - f_pole_).matrix();
      const double parsig = kAlpha * rho;
      const double pareta = kBeta * rho;
      Eigen::VectorXd vsig(n_), veta(n_);
      bool acceptable = true;
      for (Eigen::Index j = 0; j < n_; ++j) {
        vsig(j) = 1.0 / simi_.row(j).norm();
        veta(j) = sim_.col(j).norm();
        if (vsig(j) < parsig || veta(j) > pareta) acceptable = false;
      }

      if (!branch && !acceptable) {
        improve_geometry(rho, grad, vsig, veta, pareta);
        branch = true;
        continue;
      }

      bool reduce = true;
      const double gnorm = grad.norm();
      if (gnorm > 0.0) {
        const Eigen::VectorXd dx = -rho / gnorm * grad;
        const double predicted = rho * gnorm;
        if (out_of_budget()) return finish("max_evals");
        const double f_new = evaluate(pole_ + dx);
        const double actual = f_pole_ - f_new;

        // Choose the vertex that x_pole + dx replaces.
        double ratio = actual <= 0.0 ? 1.0 : 0.0;
        std::optional<Eigen::Index> drop;
        Eigen::VectorXd sigbar(n_);
        for (Eigen::Index j = 0; j < n_; ++j) {
          const double t = std::abs(simi_.row(j).dot(dx));
          if (t > ratio) {
            drop = j;
            ratio = t;
          }
          sigbar(j) = t * vsig(j);
        }
        double edgmax = kDelta * rho;
        std::optional<Eigen::Index> far;
        for (Eigen::Index j = 0; j < n_; ++j) {
          if (sigbar(j) >= parsig || sigbar(j) >= vsig(j)) {
            const double t = actual > 0.0 ? (dx - sim_.col(j)).norm() : veta(j);
            if (t > edgmax) {
              far = j;
              edgmax = t;
            }
          }
        }
        if (far) drop = far;
        if (drop) {
          replace_vertex(*drop, dx);
          fvals_(*drop) = f_new;
          if (actual > 0.0 && actual >= 0.1 * predicted) reduce = false;
        }
      }
      if (!reduce) continue;

      if (!acceptable) {
        branch = false;
        continue;
      }
      if (rho <= cfg_.rho_end) return finish("rho_end reached");
      rho *= 0.5;
      if (rho <= 1.5 * cfg_.rho_end) rho = cfg_.rho_end;
    }
  }

 private:
  double evaluate(const Eigen::VectorXd& x) {
    const double value = f_(std::span<const double>(x.data(), static_cast<std::size_t>(n_)));
    result_.history.push_back(value);
    if (result_.x.empty() || value < result_.f) {
      result_.f = value;
      result_.x.assign(x.data(), x.data() + n_);
    }
    return value;
  }

  bool out_of_budget() const { return result_.history.size() >= cfg_.max_evals; }

  OptimizeResult finish(std::string reason) {
    result_.stop_reason = std::move(reason);
    return std::move(result_);
  }

  void switch_pole_to_best() {
    Eigen::Index best = -1;
    double f_best = f_pole_;
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (fvals_(j) < f_best) {
        best = j;
        f_best = fvals_(j);
      }
    }
    if (best < 0) return;
    std::swap(fvals_(best), f_pole_);
    const Eigen::VectorXd shift = sim_.col(best);
    pole_ += shift;
    sim_.col(best).setZero();
    sim_.colwise() -= shift;
    simi_.row(best) = -simi_.colwise().sum();
  }

  // Sherman-Morrison update of simi_ for sim_.col(j) = dx.
  void replace_vertex(Eigen::Index j, const Eigen::VectorXd& dx) {
    sim_.col(j) = dx;
    simi_.row(j) /= simi_.row(j).dot(dx);
    for (Eigen::Index k = 0; k < n_; ++k) {
      if (k != j) simi_.row(k) -= simi_.row(k).dot(dx) * simi_.row(j);
    }
  }

  void improve_geometry(double rho, const Eigen::VectorXd& grad, const Eigen::VectorXd& vsig,
                        const Eigen::VectorXd& veta, double pareta) {
    Eigen::Index drop = -1;
    double worst = pareta;
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (veta(j) > worst) {
        drop = j;
        worst = veta(j);
      }
    }
    if (drop < 0) {
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (vsig(j) < worst) {
          drop = j;
          worst = vsig(j);
        }
      }
    }
    Eigen::VectorXd dx = (kGamma * rho * vsig(drop)) * simi_.row(drop).transpose();
    // Move downhill on the linear model.
    if (grad.dot(dx) > 0.0) dx = -dx;
    replace_vertex(drop, dx);
    fvals_(drop) = evaluate(pole_ + dx);
  }

  const Objective& f_;
  OptimizerConfig cfg_;
  Eigen::Index n_;
  Eigen::VectorXd pole_;
  double f_pole_ = 0.0;
  Eigen::MatrixXd sim_;   // column j: vertex j minus the pole
  Eigen::MatrixXd simi_;  // inverse of sim_
  Eigen::VectorXd fvals_;
  OptimizeResult result_;
};

}  // namespace

OptimizeResult cobyla_minimize(const Objective& f, std::vector<double> x0,
                               const OptimizerConfig& config) {
  validate(config);
  if (x0.empty()) throw ConfigError("cannot optimise over zero parameters");
  if (config.max_evals < x0.size() + 2) {
    throw ConfigError("max_evals " + std::to_string(config.max_evals) +
                      " is below dim + 2 = " + std::to_string(x0.size() + 2));
  }
  return Cobyla(f, std::move(x0), config).run();
}

}  // namespace qae
