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

#include "fidkit/testpatterns.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fidkit/pixel.h"

namespace fidkit {
namespace {

struct IdVisitor {
  std::string operator()(const CircleOutline& c) const {
    return "circle-r" + std::to_string(c.radius) + "-t" + std::to_string(c.thickness);
  }
  std::string operator()(const Checkerboard& c) const {
    return "checkerboard-p" + std::to_string(c.period);
  }
  std::string operator()(const ZonePlate& z) const {
    return "zoneplate-f" + std::to_string(z.max_frequency);
  }
};

class Generator {
 public:
  Generator(int width, int height) : w_(width), h_(height) {}

  ImageF operator()(const CircleOutline& c) const {
    FIDKIT_CHECK(c.radius > 0.0 && c.thickness > 0.0,
                 "circle: radius and thickness must be positive");
    FIDKIT_CHECK(c.radius + c.thickness / 2 <= std::min(w_, h_) / 2.0,
                 "circle: ring does not fit on the canvas");
    ImageF out(w_, h_);
    const double cx = w_ / 2.0, cy = h_ / 2.0;
    const double inner = c.radius - c.thickness / 2, outer = c.radius + c.thickness / 2;
    for (int y = 0; y < h_; ++y) {
      for (int x = 0; x < w_; ++x) {
        const double d = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
        // Exact radial box-filter coverage of the annulus.
        const double cover =
            std::max(0.0, std::min(d + 0.5, outer) - std::max(d - 0.5, inner));
        fill(out, x, y, static_cast<float>(255.0 * std::min(1.0, cover)));
      }
    }
    return out;
  }

  ImageF operator()(const Checkerboard& c) const {
    FIDKIT_CHECK(c.period >= 2 && c.period % 2 == 0,
                 "checkerboard: period must be an even number of pixels >= 2 "
                 "(period 2 is the canvas Nyquist limit)");
    const int half = c.period / 2;
    ImageF out(w_, h_);
    for (int y = 0; y < h_; ++y)
      for (int x = 0; x < w_; ++x)
        fill(out, x, y, ((x / half + y / half) % 2) ? 255.0f : 0.0f);
    return out;
  }

  ImageF operator()(const ZonePlate& z) const {
    FIDKIT_CHECK(z.max_frequency > 0.0 && z.max_frequency <= 0.5,
                 "zone plate: max frequency must be in (0, 0.5] cycles/pixel");
    const int cx = w_ / 2, cy = h_ / 2;
    const double r_max = std::hypot(cx, cy);
    const double k = std::numbers::pi * z.max_frequency / r_max;
    ImageF out(w_, h_);
    for (int y = 0; y < h_; ++y) {
      for (int x = 0; x < w_; ++x) {
        const double r2 = static_cast<double>(x - cx) * (x - cx) +
                          static_cast<double>(y - cy) * (y - cy);
        fill(out, x, y, static_cast<float>(127.5 * (1.0 + std::cos(k * r2))));
      }
    }
    return out;
  }

 private:
  static void fill(ImageF& img, int x, int y, float v) {
    for (int c = 0; c < ImageF::kChannels; ++c) img(x, y, c) = v;
  }

  int w_, h_;
};

}  // namespace

std::string Pattern::id() const { return std::visit(IdVisitor{}, kind); }

Image8 generate(const Pattern& pattern) {
  FIDKIT_CHECK(pattern.width >= 16 && pattern.height >= 16,
               "pattern canvas must be at least 16x16");
  return quantize(std::visit(Generator(pattern.width, pattern.height), pattern.kind));
}

template <typename Scalar>
double ring_gap_fraction(const Image<Scalar>& img, double radius_scaled) {
  const int w = img.width(), h = img.height();
  const double cx = w / 2.0, cy = h / 2.0;
  FIDKIT_CHECK(std::isfinite(radius_scaled) && radius_scaled >= 1.0 &&
                   radius_scaled < std::min(cx, cy),
               "ring_gap_fraction: degenerate radius " + std::to_string(radius_scaled));
  Eigen::ArrayXXd intensity(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      intensity(y, x) = (static_cast<double>(img(x, y, 0)) + img(x, y, 1) + img(x, y, 2)) / 3.0;
  const double threshold = kRingGapThreshold * intensity.maxCoeff();
  if (!(intensity.maxCoeff() > 0.0)) return 1.0;

  int gaps = 0;
  for (int k = 0; k < kRingSamples; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / kRingSamples;
    const int px = static_cast<int>(std::floor(cx + radius_scaled * std::cos(theta)));
    const int py = static_cast<int>(std::floor(cy + radius_scaled * std::sin(theta)));
    double local = -1.0;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = std::clamp(px + dx, 0, w - 1), y = std::clamp(py + dy, 0, h - 1);
        local = std::max(local, intensity(y, x));
      }
    }
    if (local < threshold) ++gaps;
  }
  return static_cast<double>(gaps) / kRingSamples;
}

template <typename Scalar>
double aliasing_energy(const Image<Scalar>& img) {
  const auto v = img.pixels().template cast<double>();
  return (v - v.mean()).square().mean();
}

template double ring_gap_fraction(const Image8&, double);
template double ring_gap_fraction(const ImageF&, double);
template double aliasing_energy(const Image8&);
template double aliasing_energy(const ImageF&);

}  // namespace fidkit
