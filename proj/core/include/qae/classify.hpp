#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qae/circuits.hpp"
#include "qae/data.hpp"

namespace qae {

/// Which trash-register patterns compete in the argmax.
enum class ArgmaxDomain : std::uint8_t {
  AssignedClasses,  // patterns 0..C-1 only
  AllPatterns,      // all 2^l patterns; a winner >= C counts as unassigned
};

std::string_view argmax_domain_name(ArgmaxDomain domain);
ArgmaxDomain argmax_domain_from_name(std::string_view name);

struct PredictionRecord {
  std::vector<double> raw_marginal;  // 2^l trash-register probabilities
  std::vector<double> class_probs;   // raw_marginal[0..C) renormalised
  std::uint32_t predicted = 0;       // may be >= C under ArgmaxDomain::AllPatterns
  std::uint32_t truth = 0;
};

/// Builds a record from a trash marginal. Ties go to the smallest index.
PredictionRecord classify_marginal(std::vector<double> raw_marginal, std::size_t class_count,
                                   std::uint32_t truth,
                                   ArgmaxDomain domain = ArgmaxDomain::AssignedClasses);

PredictionRecord predict(std::span<const double> x, std::span<const double> theta,
                         const RegisterLayout& layout, const AnsatzSpec& spec,
                         std::size_t class_count, std::uint32_t truth = 0,
                         ArgmaxDomain domain = ArgmaxDomain::AssignedClasses);

struct EvalReport {
  double accuracy = 0.0;
  double log_loss = 0.0;
  std::size_t class_count = 0;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
  std::vector<std::size_t> unassigned;              // per truth, AllPatterns only
  std::vector<double> per_class_accuracy;
  std::vector<PredictionRecord> records;            // in test-set order
};

EvalReport evaluate(const EncodedDataset& test, std::span<const double> theta,
                    const RegisterLayout& layout, const AnsatzSpec& spec,
                    ArgmaxDomain domain = ArgmaxDomain::AssignedClasses, unsigned threads = 0);

/// Aggregates already computed records (accuracy, confusion, log loss).
EvalReport summarize(std::vector<PredictionRecord> records, std::size_t class_count);

inline constexpr double kLogLossFloor = 1e-15;

/// Mean negative log-probability of the true class, probabilities clamped
/// at kLogLossFloor.
double log_loss(std::span<const PredictionRecord> records, std::size_t class_count);

std::string render_confusion_text(const EvalReport& report, std::span<const int> class_labels);
std::string render_confusion_svg(const EvalReport& report, std::span<const int> class_labels);

struct PcaProjection {
  Eigen::MatrixXd coordinates;       // samples x dims
  Eigen::MatrixXd components;        // dims x features, unit rows
  Eigen::VectorXd singular_values;   // descending, first `dims`
  Eigen::VectorXd mean;
};

/// Mean-centred projection onto the leading right singular vectors. Each
/// component is signed so that its largest-magnitude loading is positive.
PcaProjection pca_project(std::span<const std::vector<double>> samples, int dims = 2);

}  // namespace qae
