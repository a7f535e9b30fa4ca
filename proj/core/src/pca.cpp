#include <algorithm>

#include "qae/classify.hpp"
#include "qae/error.hpp"

namespace qae {

PcaProjection pca_project(std::span<const std::vector<double>> samples, int dims) {
  if (samples.size() < 2) throw DataError("PCA needs at least two samples");
  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(samples.front().size());
  if (dims < 1 || dims > cols) throw ConfigError("PCA dimension out of range");

  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(s.size()) != cols) throw DataError("ragged PCA input");
    x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(s.data(), cols);
  }
  PcaProjection out;
  out.mean = x.colwise().mean().transpose();
  x.rowwise() -= out.mean.transpose();

  const double scale = std::max(1.0, out.mean.cwiseAbs().maxCoeff());
  if (x.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    throw DataError("PCA input is degenerate (all samples identical)");
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const auto k = std::min<Eigen::Index>(dims, svd.singularValues().size());
  out.singular_values = svd.singularValues().head(k);
  out.components = svd.matrixV().leftCols(k).transpose();
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    out.components.row(c).cwiseAbs().maxCoeff(&arg);
    if (out.components(c, arg) < 0.0) out.components.row(c) *= -1.0;
  }
  out.coordinates = x * out.components.transpose();
  return out;
}

}  // namespace qae
