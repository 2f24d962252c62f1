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

#include "fidkit/pixel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fidkit {

Image8 quantize(const ImageF& img) {
  Image8 out(img.width(), img.height());
  const auto& in = img.pixels();
  auto& dst = out.pixels();
  for (Eigen::Index y = 0; y < in.rows(); ++y) {
    for (Eigen::Index i = 0; i < in.cols(); ++i) {
      const float v = in(y, i);
      if (!std::isfinite(v)) {
        throw Error("quantize: non-finite value at pixel (x=" +
                    std::to_string(i / Image8::kChannels) +
                    ", y=" + std::to_string(y) +
                    ", c=" + std::to_string(i % Image8::kChannels) + ")");
      }
      // nearbyint under the default rounding mode is round-half-to-even.
      const float r = std::nearbyint(std::clamp(v, 0.0f, 255.0f));
      dst(y, i) = static_cast<std::uint8_t>(r);
    }
  }
  return out;
}

CompressionSpec CompressionSpec::Jpeg(int quality) {
  FIDKIT_CHECK(quality >= 1 && quality <= 100,
               "jpeg quality must be in [1, 100], got " + std::to_string(quality));
  return CompressionSpec(CompressionFormat::kJpeg, quality);
}

std::string CompressionSpec::id() const {
  if (format_ == CompressionFormat::kPngLossless) return "png";
  return "jpeg-" + std::to_string(*quality_);
}

CompressionSpec CompressionSpec::Parse(const std::string& id) {
  if (id == "png") return Png();
  if (id.rfind("jpeg-", 0) == 0) {
    std::size_t consumed = 0;
    int q = 0;
    try {
      q = std::stoi(id.substr(5), &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed == id.size() - 5 && consumed > 0) return Jpeg(q);
  }
  throw Error("unknown compression id '" + id + "' (expected png or jpeg-<q>)");
}

double mean_squared_error(const Image8& a, const Image8& b) {
  FIDKIT_CHECK(a.width() == b.width() && a.height() == b.height(),
               "psnr: dimension mismatch " + std::to_string(a.width()) + "x" +
                   std::to_string(a.height()) + " vs " +
                   std::to_string(b.width()) + "x" + std::to_string(b.height()));
  const auto diff = a.pixels().cast<double>() - b.pixels().cast<double>();
  return diff.square().mean();
}

double psnr(const Image8& a, const Image8& b) {
  const double mse = mean_squared_error(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(255.0 / std::sqrt(mse));
}

BatchPsnr summarize_psnr(const std::vector<double>& per_pair_db) {
  BatchPsnr out;
  double sum = 0.0;
  for (double v : per_pair_db) {
    if (std::isinf(v)) {
      ++out.infinite_pairs;
    } else {
      sum += v;
      ++out.finite_pairs;
    }
  }
  out.mean_db = out.finite_pairs == 0 ? std::numeric_limits<double>::infinity()
                                      : sum / static_cast<double>(out.finite_pairs);
  return out;
}

}  // namespace fidkit
