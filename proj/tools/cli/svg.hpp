#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qae::cli {

/// Scatter of 2-D points coloured by truth class; misclassified points are
/// drawn as crosses.
std::string render_pca_svg(const Eigen::MatrixXd& coordinates, std::span<const std::uint32_t> truth,
                           std::span<const std::uint8_t> correct, std::span<const int> class_labels);

}  // namespace qae::cli
