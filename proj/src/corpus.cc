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

#include "fidkit/corpus.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "fidkit/error.h"
#include "fidkit/pixel.h"
#include "fidkit/rng.h"

namespace fidkit {
namespace {

using Color = std::array<double, 3>;

Color random_color(Rng& rng) {
  return {rng.uniform(64, 192), rng.uniform(64, 192), rng.uniform(64, 192)};
}

// Per-channel gain near 1, so a modulation is mostly a brightness change.
Color random_tint(Rng& rng) {
  return {rng.uniform(0.97, 1.03), rng.uniform(0.97, 1.03), rng.uniform(0.97, 1.03)};
}

// Bilinearly interpolated lattice noise with the given cell size and
// `planes` independent lattices, values in [-1, 1].
class ValueNoise {
 public:
  ValueNoise(Rng& rng, int size, double cell, int planes) : cell_(cell), planes_(planes) {
    n_ = static_cast<int>(std::ceil(size / cell)) + 2;
    values_.resize(static_cast<std::size_t>(n_) * n_ * planes);
    for (double& v : values_) v = rng.uniform(-1.0, 1.0);
  }

  double at(double x, double y, int c) const {
    const double fx = x / cell_, fy = y / cell_;
    const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
    const double tx = fx - ix, ty = fy - iy;
    const double a = v(ix, iy, c), b = v(ix + 1, iy, c);
    const double d = v(ix, iy + 1, c), e = v(ix + 1, iy + 1, c);
    return (a * (1 - tx) + b * tx) * (1 - ty) + (d * (1 - tx) + e * tx) * ty;
  }

 private:
  double v(int x, int y, int c) const {
    return values_[(static_cast<std::size_t>(y) * n_ + x) * planes_ + c];
  }

  double cell_;
  int planes_;
  int n_;
  std::vector<double> values_;
};

struct Rings {
  double cx, cy, frequency, phase, contrast;
  Color tint;
};

struct Checks {
  int x0, y0, x1, y1, period;
  double step;
  Color tint;
};

}  // namespace

SyntheticCorpus::SyntheticCorpus(std::size_t count, std::uint64_t seed, int size)
    : count_(count), seed_(seed), size_(size) {
  FIDKIT_CHECK(count > 0, "synthetic corpus needs at least one image");
  FIDKIT_CHECK(size >= 16, "synthetic corpus images must be at least 16x16");
}

std::string SyntheticCorpus::name(std::size_t i) const {
  return "synthetic-" + std::to_string(i) + ".png";
}

std::string SyntheticCorpus::id() const {
  return "synthetic:" + std::to_string(count_) + ":" + std::to_string(size_) +
         "@seed=" + std::to_string(seed_);
}

Image8 SyntheticCorpus::load(std::size_t i) const {
  FIDKIT_CHECK(i < count_, "synthetic image index out of range");
  Rng rng(mix_seed(seed_, i));
  const int n = size_;

  const Color g0 = random_color(rng), g1 = random_color(rng);
  const double angle = rng.uniform(0, 2 * std::numbers::pi);
  const double gx = std::cos(angle) / n, gy = std::sin(angle) / n;

  // Luminance octaves run from n/4 down to one pixel; chroma only gets the
  // two coarsest, like photos whose fine detail is mostly brightness.
  const double persistence = rng.uniform(0.45, 0.85);
  const double luma_amp = rng.uniform(15, 45);
  const double chroma_amp = rng.uniform(5, 25);
  std::vector<ValueNoise> luma, chroma;
  std::vector<double> weights;
  double w = 1.0, wsum = 0.0;
  for (double cell = n / 4.0; cell >= 1.0; cell /= 2.0) {
    luma.emplace_back(rng, n, cell, 1);
    if (chroma.size() < 2) chroma.emplace_back(rng, n, cell, 3);
    weights.push_back(w);
    wsum += w;
    w *= persistence;
  }
  for (double& x : weights) x /= wsum;

  std::vector<Rings> rings(1 + rng.below(3));
  for (Rings& r : rings) {
    r.cx = rng.uniform(0, n);
    r.cy = rng.uniform(0, n);
    r.frequency = rng.uniform(0.02, 0.45);
    r.phase = rng.uniform(0, 2 * std::numbers::pi);
    r.contrast = rng.uniform(10, 40);
    r.tint = random_tint(rng);
  }

  std::vector<Checks> checks(rng.below(3));
  for (Checks& c : checks) {
    const int w0 = n / 8 + static_cast<int>(rng.below(n / 2));
    const int h0 = n / 8 + static_cast<int>(rng.below(n / 2));
    c.x0 = static_cast<int>(rng.below(n - w0));
    c.y0 = static_cast<int>(rng.below(n - h0));
    c.x1 = c.x0 + w0;
    c.y1 = c.y0 + h0;
    c.period = 2 * (1 + static_cast<int>(rng.below(8)));
    c.step = rng.uniform(30, 60);
    c.tint = random_tint(rng);
  }

  ImageF img(n, n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      const double t = std::clamp((px - n / 2.0) * gx + (py - n / 2.0) * gy + 0.5, 0.0, 1.0);
      double lum = 0.0;
      for (std::size_t o = 0; o < luma.size(); ++o) lum += weights[o] * luma[o].at(px, py, 0);
      lum *= luma_amp;
      Color v;
      for (int c = 0; c < 3; ++c) {
        const double chr = chroma[0].at(px, py, c) + 0.5 * chroma[1].at(px, py, c);
        v[c] = g0[c] * (1 - t) + g1[c] * t + lum + chroma_amp * chr;
      }
      for (const Rings& r : rings) {
        const double d = std::hypot(px - r.cx, py - r.cy);
        const double s = r.contrast * std::cos(2 * std::numbers::pi * r.frequency * d + r.phase);
        for (int c = 0; c < 3; ++c) v[c] += s * r.tint[c];
      }
      for (const Checks& k : checks) {
        if (x < k.x0 || x >= k.x1 || y < k.y0 || y >= k.y1) continue;
        const int half = k.period / 2;
        const bool odd = (((x - k.x0) / half) + ((y - k.y0) / half)) % 2 != 0;
        const double s = odd ? 0.5 * k.step : -0.5 * k.step;
        for (int c = 0; c < 3; ++c) v[c] += s * k.tint[c];
      }
      for (int c = 0; c < 3; ++c) img(x, y, c) = static_cast<float>(std::clamp(v[c], 0.0, 255.0));
    }
  }
  return quantize(img);
}

}  // namespace fidkit
