#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qae/data.hpp"

namespace qae::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::vector<std::uint8_t> idx_image_bytes(const RawDataset& raw);
std::vector<std::uint8_t> idx_label_bytes(const RawDataset& raw);

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_gzip(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

// `per_class` images of each digit 0..classes-1; each class lights a
// different block of the grid, with seeded noise on top.
RawDataset synthetic_digits(int classes, std::size_t per_class, int side, std::uint64_t seed);

// Bundled MNIST subset, or an empty path pair when it is not present.
std::filesystem::path mnist_images();
std::filesystem::path mnist_labels();

}  // namespace qae::testing
