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

#ifndef FIDKIT_PIXEL_H_
#define FIDKIT_PIXEL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fidkit/image.h"

namespace fidkit {

// Clamps to [0, 255] and rounds half-to-even. Throws on NaN/Inf, naming the
// offending pixel.
Image8 quantize(const ImageF& img);

enum class CompressionFormat { kPngLossless, kJpeg };

class CompressionSpec {
 public:
  static CompressionSpec Png() { return CompressionSpec(CompressionFormat::kPngLossless, std::nullopt); }
  static CompressionSpec Jpeg(int quality);

  CompressionFormat format() const { return format_; }
  // Present iff format() == kJpeg.
  std::optional<int> jpeg_quality() const { return quality_; }

  // "png" or "jpeg-<q>".
  std::string id() const;
  static CompressionSpec Parse(const std::string& id);

  bool operator==(const CompressionSpec&) const = default;

 private:
  CompressionSpec(CompressionFormat format, std::optional<int> quality)
      : format_(format), quality_(quality) {}

  CompressionFormat format_;
  std::optional<int> quality_;
};

// Peak signal-to-noise ratio with peak 255, over all channels. Identical
// images give +infinity.
double psnr(const Image8& a, const Image8& b);

double mean_squared_error(const Image8& a, const Image8& b);

struct BatchPsnr {
  // Mean over the finite pairs; +inf when every pair is identical.
  double mean_db = 0.0;
  std::size_t finite_pairs = 0;
  std::size_t infinite_pairs = 0;
};

// Mean-of-PSNRs over already-paired values. Infinite entries are excluded
// from the mean and counted separately.
BatchPsnr summarize_psnr(const std::vector<double>& per_pair_db);

}  // namespace fidkit

#endif  // FIDKIT_PIXEL_H_
