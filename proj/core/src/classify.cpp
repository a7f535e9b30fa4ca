#include "qae/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qae/error.hpp"
#include "qae/parallel.hpp"

namespace qae {

std::string_view argmax_domain_name(ArgmaxDomain domain) {
  return domain == ArgmaxDomain::AssignedClasses ? "assigned-classes" : "all-patterns";
}

ArgmaxDomain argmax_domain_from_name(std::string_view name) {
  if (name == "assigned-classes") return ArgmaxDomain::AssignedClasses;
  if (name == "all-patterns") return ArgmaxDomain::AllPatterns;
  throw ConfigError("unknown argmax domain '" + std::string(name) + "'");
}

PredictionRecord classify_marginal(std::vector<double> raw_marginal, std::size_t class_count,
                                   std::uint32_t truth, ArgmaxDomain domain) {
  if (class_count < 1 || class_count > raw_marginal.size()) {
    throw ConfigError("class count " + std::to_string(class_count) + " exceeds the " +
                      std::to_string(raw_marginal.size()) + " trash patterns");
  }
  PredictionRecord rec;
  rec.truth = truth;
  double mass = 0.0;
  for (std::size_t c = 0; c < class_count; ++c) mass += raw_marginal[c];
  rec.class_probs.resize(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    rec.class_probs[c] = mass > 0.0 ? raw_marginal[c] / mass : 1.0 / static_cast<double>(class_count);
  }
  const std::span<const double> domain_probs =
      domain == ArgmaxDomain::AssignedClasses
          ? std::span<const double>(raw_marginal.data(), class_count)
          : std::span<const double>(raw_marginal);
  // max_element returns the first maximum, i.e. ties go to the smallest index.
  rec.predicted = static_cast<std::uint32_t>(
      std::max_element(domain_probs.begin(), domain_probs.end()) - domain_probs.begin());
  rec.raw_marginal = std::move(raw_marginal);
  return rec;
}

PredictionRecord predict(std::span<const double> x, std::span<const double> theta,
                         const RegisterLayout& layout, const AnsatzSpec& spec,
                         std::size_t class_count, std::uint32_t truth, ArgmaxDomain domain) {
  if (class_count > (std::size_t{1} << layout.l)) {
    throw ConfigError("class count exceeds 2^l trash patterns");
  }
  return classify_marginal(assemble_prediction_circuit(x, theta, layout, spec), class_count,
                           truth, domain);
}

EvalReport evaluate(const EncodedDataset& test, std::span<const double> theta,
                    const RegisterLayout& layout, const AnsatzSpec& spec, ArgmaxDomain domain,
                    unsigned threads) {
  if (test.size() == 0) throw ConfigError("test set is empty");
  const std::size_t classes = test.class_count();
  if (classes > (std::size_t{1} << layout.l)) {
    throw ConfigError("class count exceeds 2^l trash patterns");
  }
  if (spec.n_qubits != layout.n) throw ConfigError("ansatz width differs from AB register");
  if (theta.size() != ansatz_param_count(spec)) {
    throw ConfigError("parameter vector does not match the ansatz");
  }
  const Circuit ansatz = build_ansatz(spec);
  std::vector<PredictionRecord> records(test.size());
  parallel_for(
      test.size(),
      [&](std::size_t i) {
        if (test.vectors[i].size() != (std::size_t{1} << layout.n)) {
          throw ConfigError("test sample length does not match 2^n");
        }
        records[i] = classify_marginal(
            trash_marginal(amplitude_encode(test.vectors[i]), ansatz, theta, layout), classes,
            test.labels[i], domain);
      },
      threads);
  return summarize(std::move(records), classes);
}

EvalReport summarize(std::vector<PredictionRecord> records, std::size_t class_count) {
  if (records.empty()) throw ConfigError("no records to summarize");
  EvalReport report;
  report.class_count = class_count;
  report.confusion.assign(class_count, std::vector<std::size_t>(class_count, 0));
  report.unassigned.assign(class_count, 0);
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (r.truth >= class_count) throw ContractError("record truth outside class range");
    if (r.predicted < class_count) {
      ++report.confusion[r.truth][r.predicted];
    } else {
      ++report.unassigned[r.truth];
    }
    if (r.predicted == r.truth) ++correct;
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
  report.per_class_accuracy.resize(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    std::size_t row = report.unassigned[c];
    for (auto v : report.confusion[c]) row += v;
    report.per_class_accuracy[c] =
        row ? static_cast<double>(report.confusion[c][c]) / static_cast<double>(row) : 0.0;
  }
  report.log_loss = log_loss(records, class_count);
  report.records = std::move(records);
  return report;
}

double log_loss(std::span<const PredictionRecord> records, std::size_t class_count) {
  if (records.empty()) return 0.0;
  double total = 0.0;
  for (const auto& r : records) {
    if (r.class_probs.size() != class_count || r.truth >= class_count) {
      throw ContractError("record does not match class count");
    }
    total -= std::log(std::max(r.class_probs[r.truth], kLogLossFloor));
  }
  return total / static_cast<double>(records.size());
}

std::string render_confusion_text(const EvalReport& report, std::span<const int> class_labels) {
  const std::size_t c = report.class_count;
  std::ostringstream out;
  char cell[32];
  out << "truth\\pred";
  for (std::size_t j = 0; j < c; ++j) {
    std::snprintf(cell, sizeof cell, "%7d", j < class_labels.size() ? class_labels[j] : int(j));
    out << cell;
  }
  out << '\n';
  for (std::size_t i = 0; i < c; ++i) {
    std::snprintf(cell, sizeof cell, "%10d", i < class_labels.size() ? class_labels[i] : int(i));
    out << cell;
    for (std::size_t j = 0; j < c; ++j) {
      std::snprintf(cell, sizeof cell, "%7zu", report.confusion[i][j]);
      out << cell;
    }
    out << '\n';
  }
  std::snprintf(cell, sizeof cell, "%.4f", report.accuracy);
  out << "accuracy " << cell;
  std::snprintf(cell, sizeof cell, "%.4f", report.log_loss);
  out << "  log_loss " << cell << '\n';
  return out.str();
}

std::string render_confusion_svg(const EvalReport& report, std::span<const int> class_labels) {
  const std::size_t c = report.class_count;
  constexpr int kCell = 48;
  constexpr int kMargin = 60;
  const int size = kMargin + static_cast<int>(c) * kCell + 10;
  std::size_t peak = 1;
  for (const auto& row : report.confusion) {
    for (auto v : row) peak = std::max(peak, v);
  }
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<text x=\"" << kMargin << "\" y=\"14\">predicted</text>\n";
  out << "<text x=\"4\" y=\"" << kMargin - 8 << "\">truth</text>\n";
  for (std::size_t i = 0; i < c; ++i) {
    const int label = i < class_labels.size() ? class_labels[i] : static_cast<int>(i);
    out << "<text x=\"" << kMargin + static_cast<int>(i) * kCell + kCell / 2 - 4 << "\" y=\""
        << kMargin - 8 << "\">" << label << "</text>\n";
    out << "<text x=\"" << kMargin - 20 << "\" y=\"" << kMargin + static_cast<int>(i) * kCell + kCell / 2 + 4
        << "\">" << label << "</text>\n";
    for (std::size_t j = 0; j < c; ++j) {
      const double t = static_cast<double>(report.confusion[i][j]) / static_cast<double>(peak);
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      out << "<rect x=\"" << kMargin + static_cast<int>(j) * kCell << "\" y=\""
          << kMargin + static_cast<int>(i) * kCell << "\" width=\"" << kCell << "\" height=\""
          << kCell << "\" fill=\"rgb(" << shade << "," << shade << ",255)\" stroke=\"#888\"/>\n";
      out << "<text x=\"" << kMargin + static_cast<int>(j) * kCell + 6 << "\" y=\""
          << kMargin + static_cast<int>(i) * kCell + kCell / 2 + 4 << "\" fill=\""
          << (t > 0.5 ? "white" : "black") << "\">" << report.confusion[i][j] << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qae
