#include "qae/data.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>

#include <zlib.h>

#include "qae/error.hpp"
#include "qae/hash.hpp"
#include "qae/rng.hpp"

namespace qae {
namespace {

struct GzCloser {
  void operator()(gzFile f) const { gzclose(f); }
};
using GzHandle = std::unique_ptr<gzFile_s, GzCloser>;

class IdxReader {
 public:
  explicit IdxReader(const std::filesystem::path& path) : path_(path.string()) {
    if (!std::filesystem::is_regular_file(path)) {
      throw DataError("IDX file not found: " + path_);
    }
    file_.reset(gzopen(path_.c_str(), "rb"));
    if (!file_) throw DataError("cannot open " + path_);
  }

  void read(void* out, std::size_t bytes) {
    auto* dst = static_cast<unsigned char*>(out);
    while (bytes > 0) {
      const auto chunk = static_cast<unsigned>(std::min<std::size_t>(bytes, 1u << 30));
      const int got = gzread(file_.get(), dst, chunk);
      if (got <= 0) throw FormatError(path_ + ": truncated IDX file");
      dst += got;
      bytes -= static_cast<std::size_t>(got);
    }
  }

  std::uint32_t read_u32() {
    unsigned char b[4];
    read(b, 4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
           (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  GzHandle file_;
};

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", v);
  return buf;
}

// Taps and weights of a 1-D triangle filter for one output coordinate.
struct Taps {
  std::vector<int> index;
  std::vector<double> weight;
};

std::vector<Taps> resample_taps(int in, int out) {
  const double scale = static_cast<double>(in) / out;
  const double width = std::max(scale, 1.0);
  std::vector<Taps> taps(static_cast<std::size_t>(out));
  for (int i = 0; i < out; ++i) {
    const double center = (i + 0.5) * scale - 0.5;
    const int lo = static_cast<int>(std::floor(center - width));
    const int hi = static_cast<int>(std::ceil(center + width));
    double total = 0.0;
    auto& t = taps[static_cast<std::size_t>(i)];
    for (int j = lo; j <= hi; ++j) {
      const double w = 1.0 - std::abs(j - center) / width;
      if (w <= 0.0) continue;
      t.index.push_back(std::clamp(j, 0, in - 1));
      t.weight.push_back(w);
      total += w;
    }
    for (auto& w : t.weight) w /= total;
  }
  return taps;
}

}  // namespace

RawDataset load_idx(const std::filesystem::path& images_path,
                    const std::filesystem::path& labels_path) {
  IdxReader images(images_path);
  const auto image_magic = images.read_u32();
  if (image_magic != kIdxImageMagic) {
    throw FormatError(images.path() + ": expected image magic 0x00000803, found " +
                      hex32(image_magic));
  }
  const auto count = images.read_u32();
  const auto rows = images.read_u32();
  const auto cols = images.read_u32();
  if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096) {
    throw FormatError(images.path() + ": implausible image dimensions");
  }

  IdxReader labels(labels_path);
  const auto label_magic = labels.read_u32();
  if (label_magic != kIdxLabelMagic) {
    throw FormatError(labels.path() + ": expected label magic 0x00000801, found " +
                      hex32(label_magic));
  }
  const auto label_count = labels.read_u32();
  if (label_count != count) {
    throw DataError("image count " + std::to_string(count) + " does not match label count " +
                    std::to_string(label_count));
  }

  RawDataset raw;
  raw.rows = static_cast<int>(rows);
  raw.cols = static_cast<int>(cols);
  raw.pixels.resize(std::size_t{count} * rows * cols);
  raw.labels.resize(count);
  images.read(raw.pixels.data(), raw.pixels.size());
  labels.read(raw.labels.data(), raw.labels.size());
  return raw;
}

Image Image::from_bytes(std::span<const std::uint8_t> bytes, int rows, int cols) {
  if (bytes.size() != static_cast<std::size_t>(rows) * cols) {
    throw ContractError("pixel buffer does not match image shape");
  }
  return Image{rows, cols, std::vector<double>(bytes.begin(), bytes.end())};
}

Image resize(const Image& image, int side) {
  if (side < 2) throw ConfigError("resize side must be at least 2");
  if (image.rows < 1 || image.cols < 1) throw ContractError("cannot resize an empty image");
  const auto row_taps = resample_taps(image.rows, side);
  const auto col_taps = resample_taps(image.cols, side);

  // Horizontal pass: rows x side.
  std::vector<double> tmp(static_cast<std::size_t>(image.rows) * side, 0.0);
  for (int r = 0; r < image.rows; ++r) {
    for (int c = 0; c < side; ++c) {
      const auto& t = col_taps[static_cast<std::size_t>(c)];
      double acc = 0.0;
      for (std::size_t k = 0; k < t.index.size(); ++k) acc += t.weight[k] * image.at(r, t.index[k]);
      tmp[static_cast<std::size_t>(r) * side + c] = acc;
    }
  }
  Image out{side, side, std::vector<double>(static_cast<std::size_t>(side) * side, 0.0)};
  for (int r = 0; r < side; ++r) {
    const auto& t = row_taps[static_cast<std::size_t>(r)];
    for (int c = 0; c < side; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < t.index.size(); ++k) {
        acc += t.weight[k] * tmp[static_cast<std::size_t>(t.index[k]) * side + c];
      }
      out.pixels[static_cast<std::size_t>(r) * side + c] = std::clamp(acc, 0.0, 255.0);
    }
  }
  return out;
}

std::vector<double> to_unit_vector(const Image& image) {
  double norm2 = 0.0;
  for (double v : image.pixels) norm2 += v * v;
  if (!(norm2 > 0.0)) throw DataError("cannot normalise an all-zero image");
  const double inv = 1.0 / std::sqrt(norm2);
  std::vector<double> out(image.pixels.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = image.pixels[i] * inv;
  return out;
}

std::vector<std::size_t> EncodedDataset::class_counts() const {
  std::vector<std::size_t> counts(classes.size(), 0);
  for (auto y : labels) ++counts.at(y);
  return counts;
}

std::string EncodedDataset::fingerprint() const {
  Sha256 h;
  h.update("qae-dataset-v1");
  h.update_u64(split == Split::Train ? 0 : 1).update_u64(seed).update_u64(static_cast<std::uint64_t>(side));
  h.update_u64(classes.size());
  for (int c : classes) h.update_u64(static_cast<std::uint64_t>(c));
  h.update_u64(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    h.update_u64(labels[i]).update_u64(source_indices[i]).update_u64(vectors[i].size());
    for (double v : vectors[i]) h.update_f64(v);
  }
  return h.hex_digest();
}

std::pair<EncodedDataset, EncodedDataset> build_subset(const RawDataset& raw,
                                                       const SubsetConfig& config) {
  const std::size_t n_classes = config.classes.size();
  if (n_classes == 0) throw ConfigError("class list is empty");
  {
    auto sorted = config.classes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("class list contains duplicates");
    }
  }
  if (config.side < 2 || !std::has_single_bit(static_cast<unsigned>(config.side))) {
    throw ConfigError("image side must be a power of two >= 2");
  }
  if (config.n_train == 0 || config.n_test == 0) throw ConfigError("split sizes must be positive");

  auto share = [&](std::size_t total, std::size_t c) {
    return total / n_classes + (c < total % n_classes ? 1 : 0);
  };

  Rng rng(config.seed);
  std::vector<std::vector<std::size_t>> train_pick(n_classes), test_pick(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw.labels[i] == config.classes[c]) pool.push_back(i);
    }
    const std::size_t want_train = share(config.n_train, c);
    const std::size_t want_test = share(config.n_test, c);
    if (pool.size() < want_train + want_test) {
      throw DataError("class " + std::to_string(config.classes[c]) + " has " +
                      std::to_string(pool.size()) + " samples, need " +
                      std::to_string(want_train + want_test));
    }
    rng.shuffle(pool.begin(), pool.end());
    train_pick[c].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(want_train));
    test_pick[c].assign(pool.begin() + static_cast<std::ptrdiff_t>(want_train),
                        pool.begin() + static_cast<std::ptrdiff_t>(want_train + want_test));
  }

  auto assemble = [&](const std::vector<std::vector<std::size_t>>& picks, Split split) {
    EncodedDataset ds;
    ds.classes = config.classes;
    ds.split = split;
    ds.seed = config.seed;
    ds.side = config.side;
    std::size_t longest = 0;
    for (const auto& p : picks) longest = std::max(longest, p.size());
    for (std::size_t round = 0; round < longest; ++round) {
      for (std::size_t c = 0; c < n_classes; ++c) {
        if (round >= picks[c].size()) continue;
        const std::size_t src = picks[c][round];
        const Image img = Image::from_bytes(raw.image(src), raw.rows, raw.cols);
        ds.vectors.push_back(to_unit_vector(resize(img, config.side)));
        ds.labels.push_back(static_cast<std::uint32_t>(c));
        ds.source_indices.push_back(src);
      }
    }
    return ds;
  };
  return {assemble(train_pick, Split::Train), assemble(test_pick, Split::Test)};
}

}  // namespace qae
