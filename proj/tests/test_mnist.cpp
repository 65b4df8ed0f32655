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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "qumem/mnist.hpp"

namespace qumem::mnist {
namespace {

namespace fs = std::filesystem;

void put32(std::ofstream& f, std::uint32_t v) {
  const char b[4] = {char(v >> 24), char(v >> 16), char(v >> 8), char(v)};
  f.write(b, 4);
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("qumem_mnist_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Writes n images whose pixels all equal their label * 20 (label cycles through `labels`).
void write_pair(const fs::path& dir, const std::vector<int>& labels) {
  std::ofstream img(dir / "img", std::ios::binary), lbl(dir / "lbl", std::ios::binary);
  put32(img, 2051);
  put32(img, labels.size());
  put32(img, 28);
  put32(img, 28);
  for (int l : labels) {
    const std::string px(784, char(l * 20));
    img.write(px.data(), px.size());
  }
  put32(lbl, 2049);
  put32(lbl, labels.size());
  for (int l : labels) lbl.put(char(l));
}

TEST(Idx, ParsesLabels) {
  TempDir t;
  std::vector<int> labels{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  write_pair(t.path, labels);
  const auto parsed = read_idx_labels(t.path / "lbl");
  ASSERT_EQ(parsed.size(), 10u);
  EXPECT_EQ(parsed[7], 7);
  EXPECT_EQ(read_idx_images(t.path / "img").count(), 10u);
}

TEST(Idx, RejectsBadMagicAndTruncation) {
  TempDir t;
  write_pair(t.path, {1, 2});
  EXPECT_THROW(read_idx_labels(t.path / "img"), DataError);
  EXPECT_THROW(read_idx_images(t.path / "lbl"), DataError);
  fs::resize_file(t.path / "img", 16 + 784 + 10);
  EXPECT_THROW(read_idx_images(t.path / "img"), DataError);
  EXPECT_THROW(read_idx_labels(t.path / "missing"), DataError);
}

TEST(Crop, AllOnesStaysAllOnes) {
  IdxImages img;
  img.rows = img.cols = 28;
  img.pixels.assign(784, 255);
  const RMatrix c = crop(img, 0, CropWindow{});
  EXPECT_EQ(c.rows(), 18);
  EXPECT_EQ(c.cols(), 12);
  EXPECT_EQ(c.minCoeff(), 1.0);
  CropWindow off{20, 20, 18, 12};
  EXPECT_THROW(crop(img, 0, off), DimensionError);
}

TEST(Crop, WindowPosition) {
  IdxImages img;
  img.rows = img.cols = 28;
  img.pixels.assign(784, 0);
  img.pixels[5 * 28 + 8] = 255;    // top-left corner of the window
  img.pixels[22 * 28 + 19] = 51;   // bottom-right corner
  img.pixels[4 * 28 + 8] = 255;    // just outside
  const RMatrix c = crop(img, 0, CropWindow{});
  EXPECT_EQ(c(0, 0), 1.0);
  EXPECT_NEAR(c(17, 11), 0.2, 1e-15);
  EXPECT_NEAR(c.sum(), 1.2, 1e-12);
}

TEST(Load, BalancedDisjointSplits) {
  TempDir t;
  std::vector<int> labels;
  for (int k = 0; k < 30; ++k) labels.push_back(k % 10);
  write_pair(t.path, labels);
  MnistRequest req;
  req.images = t.path / "img";
  req.labels = t.path / "lbl";
  req.n_train = 4;
  req.n_test = 3;
  const auto s = load_mnist(req);
  ASSERT_EQ(s.train.size(), 4u);
  ASSERT_EQ(s.test.size(), 3u);
  std::set<std::size_t> seen;
  int per_class[3] = {0, 0, 0};
  for (const auto& i : s.train) seen.insert(i.source_index);
  for (const auto& i : s.test) {
    EXPECT_FALSE(seen.count(i.source_index));
    ++per_class[i.label];
  }
  EXPECT_EQ(per_class[0], 1);
  EXPECT_EQ(per_class[1], 1);
  EXPECT_EQ(per_class[2], 1);
  for (const auto& i : s.train) EXPECT_NEAR(i.pixels(0, 0), i.digit * 20 / 255.0, 1e-15);
  req.n_train = 20;
  EXPECT_THROW(load_mnist(req), DataError);
}

TEST(Load, QuotasSplitEvenly) {
  EXPECT_EQ(class_quotas(1000, 3), (std::vector<std::size_t>{334, 333, 333}));
}

TEST(Sequence, ColumnsLeftToRight) {
  RMatrix img(18, 12);
  for (int r = 0; r < 18; ++r)
    for (int c = 0; c < 12; ++c) img(r, c) = r * 100 + c;
  const auto seq = columns_as_sequence(img);
  ASSERT_EQ(seq.size(), 12u);
  EXPECT_EQ(seq[3].size(), 18);
  EXPECT_EQ(seq[3](5), 503);
  const auto flat = columns_as_sequence(RMatrix::Constant(18, 12, 0.4));
  for (const auto& v : flat) EXPECT_EQ(v, flat.front());
  EXPECT_THROW(columns_as_sequence(img.transpose()), DimensionError);
}

}  // namespace
}  // namespace qumem::mnist
