// Copyright 2026 The qumem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qumem/mnist.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace qumem::mnist {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
         std::uint32_t{b[at + 3]};
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() < 16) throw DataError("truncated IDX image header in " + path.string());
  if (be32(bytes, 0) != kImageMagic) throw DataError("bad IDX image magic in " + path.string());
  const std::size_t n = be32(bytes, 4);
  IdxImages out;
  out.rows = static_cast<int>(be32(bytes, 8));
  out.cols = static_cast<int>(be32(bytes, 12));
  const std::size_t need = n * out.rows * out.cols;
  if (bytes.size() - 16 < need) throw DataError("truncated IDX image data in " + path.string());
  out.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(need));
  return out;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() < 8) throw DataError("truncated IDX label header in " + path.string());
  if (be32(bytes, 0) != kLabelMagic) throw DataError("bad IDX label magic in " + path.string());
  const std::size_t n = be32(bytes, 4);
  if (bytes.size() - 8 < n) throw DataError("truncated IDX label data in " + path.string());
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(n)};
}

RMatrix crop(const IdxImages& images, std::size_t index, const CropWindow& w) {
  if (index >= images.count()) throw DataError("image index out of range");
  if (w.row0 < 0 || w.col0 < 0 || w.row0 + w.rows > images.rows || w.col0 + w.cols > images.cols)
    throw DimensionError("crop window outside the image");
  const std::size_t base = index * images.rows * images.cols;
  RMatrix out(w.rows, w.cols);
  for (int r = 0; r < w.rows; ++r)
    for (int c = 0; c < w.cols; ++c)
      out(r, c) = images.pixels[base + (w.row0 + r) * images.cols + (w.col0 + c)] / 255.0;
  return out;
}

std::vector<std::size_t> class_quotas(std::size_t total, std::size_t classes) {
  std::vector<std::size_t> q(classes, total / classes);
  for (std::size_t i = 0; i < total % classes; ++i) ++q[i];
  return q;
}

MnistSubset load_mnist(const MnistRequest& req) {
  const auto images = read_idx_images(req.images);
  const auto labels = read_idx_labels(req.labels);
  if (labels.size() != images.count()) throw DataError("image and label counts differ");
  if (req.digits.empty()) throw ConfigError("no digits requested");

  const auto train_q = class_quotas(req.n_train, req.digits.size());
  const auto test_q = class_quotas(req.n_test, req.digits.size());
  std::vector<std::size_t> seen(req.digits.size(), 0);
  MnistSubset out;
  out.digits = req.digits;
  out.window = req.window;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::find(req.digits.begin(), req.digits.end(), labels[i]);
    if (it == req.digits.end()) continue;
    const auto cls = static_cast<std::size_t>(it - req.digits.begin());
    const std::size_t k = seen[cls]++;
    if (k >= train_q[cls] + test_q[cls]) continue;
    Image img{crop(images, i, req.window), static_cast<int>(cls), labels[i], i};
    (k < train_q[cls] ? out.train : out.test).push_back(std::move(img));
  }
  for (std::size_t c = 0; c < req.digits.size(); ++c)
    if (seen[c] < train_q[c] + test_q[c])
      throw DataError("not enough images of digit " + std::to_string(req.digits[c]));
  return out;
}

MnistRequest default_request(const std::filesystem::path& root) {
  const std::pair<const char*, const char*> candidates[] = {
      {"mnist_subset/subset038-images-idx3-ubyte", "mnist_subset/subset038-labels-idx1-ubyte"},
      {"train-images-idx3-ubyte", "train-labels-idx1-ubyte"},
      {"train-images.idx3-ubyte", "train-labels.idx1-ubyte"},
  };
  for (const auto& [img, lbl] : candidates) {
    if (std::filesystem::exists(root / img) && std::filesystem::exists(root / lbl)) {
      MnistRequest r;
      r.images = root / img;
      r.labels = root / lbl;
      return r;
    }
  }
  throw DataError("no MNIST IDX files found under " + root.string());
}

std::vector<RVector> columns_as_sequence(const RMatrix& image, int expected_rows, int expected_cols) {
  if (image.rows() != expected_rows || image.cols() != expected_cols)
    throw DimensionError("image has an unexpected shape");
  std::vector<RVector> seq;
  seq.reserve(image.cols());
  for (Eigen::Index c = 0; c < image.cols(); ++c) seq.emplace_back(image.col(c));
  return seq;
}

}  // namespace qumem::mnist
