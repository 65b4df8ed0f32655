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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "qumem/common.hpp"

namespace qumem::mnist {

struct IdxImages {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols, row-major per image

  std::size_t count() const { return rows * cols == 0 ? 0 : pixels.size() / (rows * cols); }
};

IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);

struct CropWindow {
  int row0 = 5;
  int col0 = 8;
  int rows = 18;
  int cols = 12;
};

/// Crops image `index` and scales pixels to [0,1].
RMatrix crop(const IdxImages& images, std::size_t index, const CropWindow& window);

struct Image {
  RMatrix pixels;
  int label;   // class index into the digit list
  int digit;
  std::size_t source_index;
};

struct MnistSubset {
  std::vector<Image> train;
  std::vector<Image> test;
  std::vector<int> digits;
  CropWindow window;
};

struct MnistRequest {
  std::filesystem::path images;
  std::filesystem::path labels;
  std::vector<int> digits{0, 3, 8};
  CropWindow window;
  std::size_t n_train = 1000;
  std::size_t n_test = 1000;
};

/// Per-class quotas are as even as possible; the first images of each class in
/// file order go to training and the next ones to testing.
MnistSubset load_mnist(const MnistRequest& request);

/// Locates an IDX image/label pair under `root`: the bundled
/// mnist_subset/subset038-* files, or the standard train-* files.
MnistRequest default_request(const std::filesystem::path& root);

std::vector<std::size_t> class_quotas(std::size_t total, std::size_t classes);

/// Left-to-right list of pixel columns.
std::vector<RVector> columns_as_sequence(const RMatrix& image, int expected_rows = 18, int expected_cols = 12);

}  // namespace qumem::mnist
