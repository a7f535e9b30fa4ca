#include "fixtures.hpp"

#include <fstream>
#include <stdexcept>

#include <zlib.h>

#include "qae/rng.hpp"

namespace qae::testing {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

}  // namespace

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  Rng rng(reinterpret_cast<std::uintptr_t>(this) ^ ++counter);
  path_ = std::filesystem::temp_directory_path() /
          ("qae_" + tag + "_" + std::to_string(rng.next() % 1000000007ULL));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<std::uint8_t> idx_image_bytes(const RawDataset& raw) {
  std::vector<std::uint8_t> out;
  put_u32(out, kIdxImageMagic);
  put_u32(out, static_cast<std::uint32_t>(raw.size()));
  put_u32(out, static_cast<std::uint32_t>(raw.rows));
  put_u32(out, static_cast<std::uint32_t>(raw.cols));
  out.insert(out.end(), raw.pixels.begin(), raw.pixels.end());
  return out;
}

std::vector<std::uint8_t> idx_label_bytes(const RawDataset& raw) {
  std::vector<std::uint8_t> out;
  put_u32(out, kIdxLabelMagic);
  put_u32(out, static_cast<std::uint32_t>(raw.size()));
  out.insert(out.end(), raw.labels.begin(), raw.labels.end());
  return out;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_gzip(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  gzFile f = gzopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("gzopen failed");
  gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
  gzclose(f);
}

RawDataset synthetic_digits(int classes, std::size_t per_class, int side, std::uint64_t seed) {
  RawDataset raw;
  raw.rows = side;
  raw.cols = side;
  Rng rng(seed);
  const int block = side / 4;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int c = 0; c < classes; ++c) {
      const int br = (c / 4) * block;
      const int bc = (c % 4) * block;
      for (int r = 0; r < side; ++r) {
        for (int col = 0; col < side; ++col) {
          const bool lit = r >= br && r < br + block && col >= bc && col < bc + block;
          const auto noise = static_cast<int>(rng.below(40));
          raw.pixels.push_back(static_cast<std::uint8_t>(lit ? 200 + noise / 2 : noise));
        }
      }
      raw.labels.push_back(static_cast<std::uint8_t>(c));
    }
  }
  return raw;
}

std::filesystem::path mnist_images() {
  return std::filesystem::path(QAE_TEST_DATA_DIR) / "mnist5k" / "images-idx3-ubyte.gz";
}

std::filesystem::path mnist_labels() {
  return std::filesystem::path(QAE_TEST_DATA_DIR) / "mnist5k" / "labels-idx1-ubyte.gz";
}

}  // namespace qae::testing
