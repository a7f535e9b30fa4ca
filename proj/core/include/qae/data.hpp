#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qae {

/// Images and labels as stored in an IDX pair.
struct RawDataset {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols, row-major per image
  std::vector<std::uint8_t> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const std::uint8_t> image(std::size_t i) const {
    const std::size_t stride = static_cast<std::size_t>(rows) * cols;
    return {pixels.data() + i * stride, stride};
  }
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

/// Big-endian IDX reader; gzip-compressed files (1F 8B) are inflated transparently.
RawDataset load_idx(const std::filesystem::path& images_path,
                    const std::filesystem::path& labels_path);

/// Grayscale grid of real intensities on the 0..255 scale.
struct Image {
  int rows = 0;
  int cols = 0;
  std::vector<double> pixels;

  double at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * cols + c]; }
  static Image from_bytes(std::span<const std::uint8_t> bytes, int rows, int cols);
};

/// Bilinear (triangle-filter) resampling to side x side with edge clamping.
/// When shrinking, the filter widens by the scale factor so every source
/// pixel contributes.
Image resize(const Image& image, int side);

/// Row-major flatten followed by L2 normalisation.
std::vector<double> to_unit_vector(const Image& image);

enum class Split : std::uint8_t { Train, Test };

/// Amplitude-ready samples of one split; labels are positions in `classes`.
struct EncodedDataset {
  std::vector<std::vector<double>> vectors;
  std::vector<std::uint32_t> labels;
  std::vector<std::size_t> source_indices;
  std::vector<int> classes;
  Split split = Split::Train;
  std::uint64_t seed = 0;
  int side = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t class_count() const { return classes.size(); }
  std::vector<std::size_t> class_counts() const;
  /// SHA-256 over vectors, labels, seed and selection parameters.
  std::string fingerprint() const;
};

struct SubsetConfig {
  std::vector<int> classes;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  int side = 16;
  std::uint64_t seed = 0;
};

/// Seeded, class-balanced, disjoint train/test selection. Per-class counts
/// differ by at most one (remainder to the lowest class positions) and the
/// samples are interleaved round-robin by class.
std::pair<EncodedDataset, EncodedDataset> build_subset(const RawDataset& raw,
                                                       const SubsetConfig& config);

}  // namespace qae
