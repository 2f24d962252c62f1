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

#ifndef FIDKIT_RESAMPLE_H_
#define FIDKIT_RESAMPLE_H_

#include <string>
#include <string_view>
#include <vector>

#include "fidkit/image.h"

namespace fidkit {

enum class FilterKind { kNearest, kBox, kBilinear, kBicubic, kLanczos3 };

// Half-width of the kernel's nonzero interval at unit scale. Nearest has
// no kernel and reports 0.
double base_support(FilterKind filter);

std::string_view filter_name(FilterKind filter);

// Closed-form kernels: box on [-0.5, 0.5), triangle, Keys cubic with
// a = -0.5, and 3-lobe Lanczos. Not defined for nearest.
double kernel_eval(FilterKind filter, double x);

// A resizer variant: filter plus whether the kernel is widened by the
// downscale factor. Without widening, downscaling aliases the way the common
// deep-learning resize functions do.
struct Resizer {
  FilterKind filter = FilterKind::kBicubic;
  bool antialias = true;

  // Stable ids: bicubic-aa, bilinear-aa, lanczos3-aa, box-aa, bicubic-noaa,
  // bilinear-noaa, nearest. Also accepts lanczos3-noaa and box-noaa.
  std::string id() const;
  static Resizer Parse(std::string_view id);

  bool operator==(const Resizer&) const = default;
};

// The seven resizer variants in report order.
const std::vector<Resizer>& standard_resizers();

struct ResizeSpec {
  Resizer resizer;
  int out_width = 1;
  int out_height = 1;

  void validate() const;
  // "<resizer-id>@<w>x<h>"
  std::string id() const;
  bool operator==(const ResizeSpec&) const = default;
};

// Per-output-index contributions: input indices [first, first + count) with
// the matching weights. Rows are normalized to sum to one.
struct WeightTable {
  int in_size = 0;
  int out_size = 0;
  std::vector<int> first;
  std::vector<int> count;
  std::vector<int> offset;  // start of row i in weights
  std::vector<double> weights;

  std::span<const double> row(int i) const {
    return {weights.data() + offset[i], static_cast<std::size_t>(count[i])};
  }
};

WeightTable build_weights(int in_size, int out_size, FilterKind filter, bool antialias);

// Separable resize: horizontal pass then vertical pass, accumulated in double
// and rounded to float once.
// The result is float on the input's [0, 255] scale; callers quantize.
template <typename Scalar>
ImageF resize(const Image<Scalar>& img, const ResizeSpec& spec);

// Direct 2-D evaluation of the same resampling rule without separability.
// O(out * in^2); restricted to inputs of at most 128x128.
template <typename Scalar>
ImageF resize_oracle(const Image<Scalar>& img, const ResizeSpec& spec);

inline constexpr int kOracleMaxDim = 128;

extern template ImageF resize(const Image8&, const ResizeSpec&);
extern template ImageF resize(const ImageF&, const ResizeSpec&);
extern template ImageF resize_oracle(const Image8&, const ResizeSpec&);
extern template ImageF resize_oracle(const ImageF&, const ResizeSpec&);

}  // namespace fidkit

#endif  // FIDKIT_RESAMPLE_H_
