// Copyright 2026 The fidkit Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIDKIT_IMAGE_H_
#define FIDKIT_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <utility>

#include <Eigen/Core>

#include "fidkit/error.h"

namespace fidkit {

// An RGB raster stored as an H x (W*3) row-major array, so that each
// scanline is one contiguous row of interleaved RGB samples.
//
// Scalar is std::uint8_t for stored images and float for intermediate
// results; float pixels live on the [0, 255] scale and may overshoot it.
template <typename Scalar>
class Image {
 public:
  static constexpr int kChannels = 3;
  using Pixels =
      Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Image() = default;

  Image(int width, int height) : width_(width), height_(height) {
    FIDKIT_CHECK(width >= 1 && height >= 1, "image dimensions must be >= 1, got "
                                                + std::to_string(width) + "x" +
                                                std::to_string(height));
    pixels_ = Pixels::Zero(height, width * kChannels);
  }

  Image(int width, int height, Pixels pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    FIDKIT_CHECK(width >= 1 && height >= 1, "image dimensions must be >= 1");
    FIDKIT_CHECK(pixels_.rows() == height && pixels_.cols() == width * kChannels,
                 "pixel array shape does not match image dimensions");
  }

  static Image Constant(int width, int height, Scalar value) {
    Image img(width, height);
    img.pixels_.setConstant(value);
    return img;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const {
    return static_cast<std::size_t>(width_) * height_ * kChannels;
  }
  bool empty() const { return width_ == 0; }

  Scalar operator()(int x, int y, int c) const {
    return pixels_(y, x * kChannels + c);
  }
  Scalar& operator()(int x, int y, int c) {
    return pixels_(y, x * kChannels + c);
  }

  const Pixels& pixels() const { return pixels_; }
  Pixels& pixels() { return pixels_; }

  std::span<const Scalar> data() const { return {pixels_.data(), size()}; }
  std::span<Scalar> data() { return {pixels_.data(), size()}; }

  bool operator==(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           (pixels_ == other.pixels_).all();
  }

 private:
  int width_ = 0;
  int height_ = 0;
  Pixels pixels_;
};

using Image8 = Image<std::uint8_t>;
using ImageF = Image<float>;

// Exact widening conversion; narrowing to uint8 goes through quantize().
template <typename To, typename From>
Image<To> image_cast(const Image<From>& img) {
  static_assert(sizeof(To) >= sizeof(From) || !std::is_integral_v<To>,
                "use quantize() to convert float images to 8-bit");
  return Image<To>(img.width(), img.height(),
                   img.pixels().template cast<To>());
}

template <typename Scalar>
Image<Scalar> transpose(const Image<Scalar>& img) {
  Image<Scalar> out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < Image<Scalar>::kChannels; ++c) out(y, x, c) = img(x, y, c);
    }
  }
  return out;
}

template <typename Scalar>
double mean_value(const Image<Scalar>& img) {
  return img.pixels().template cast<double>().mean();
}

}  // namespace fidkit

#endif  // FIDKIT_IMAGE_H_
