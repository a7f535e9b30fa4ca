#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qae::cli {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_pca_svg(const Eigen::MatrixXd& coordinates, std::span<const std::uint32_t> truth,
                           std::span<const std::uint8_t> correct, std::span<const int> class_labels) {
  constexpr double kSize = 480.0;
  constexpr double kPad = 30.0;
  const Eigen::Index rows = coordinates.rows();
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (rows > 0) {
    x0 = coordinates.col(0).minCoeff();
    x1 = coordinates.col(0).maxCoeff();
    y0 = coordinates.col(1).minCoeff();
    y1 = coordinates.col(1).maxCoeff();
  }
  const double sx = (kSize - 2 * kPad) / std::max(x1 - x0, 1e-12);
  const double sy = (kSize - 2 * kPad) / std::max(y1 - y0, 1e-12);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize + 100 << "\" height=\""
      << kSize << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" fill=\"white\" stroke=\"#ccc\"/>\n";
  out << "<text x=\"" << kSize / 2 - 10 << "\" y=\"" << kSize - 8 << "\">PC1</text>\n";
  out << "<text x=\"4\" y=\"" << kSize / 2 << "\">PC2</text>\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double px = kPad + (coordinates(i, 0) - x0) * sx;
    const double py = kSize - kPad - (coordinates(i, 1) - y0) * sy;
    const char* colour = kPalette[truth[static_cast<std::size_t>(i)] % std::size(kPalette)];
    if (correct[static_cast<std::size_t>(i)]) {
      out << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py) << "\" r=\"3\" fill=\"" << colour
          << "\" fill-opacity=\"0.7\"/>\n";
    } else {
      out << "<path d=\"M" << fmt(px - 4) << ' ' << fmt(py - 4) << "L" << fmt(px + 4) << ' '
          << fmt(py + 4) << "M" << fmt(px - 4) << ' ' << fmt(py + 4) << "L" << fmt(px + 4) << ' '
          << fmt(py - 4) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    }
  }
  for (std::size_t c = 0; c < class_labels.size(); ++c) {
    const double y = 20.0 + 18.0 * static_cast<double>(c);
    out << "<circle cx=\"" << kSize + 16 << "\" cy=\"" << y - 4 << "\" r=\"5\" fill=\""
        << kPalette[c % std::size(kPalette)] << "\"/>\n";
    out << "<text x=\"" << kSize + 26 << "\" y=\"" << y << "\">" << class_labels[c] << "</text>\n";
  }
  out << "<text x=\"" << kSize + 8 << "\" y=\"" << 30.0 + 18.0 * static_cast<double>(class_labels.size())
      << "\">x = wrong</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace qae::cli
