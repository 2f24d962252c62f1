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

#ifndef FIDKIT_TESTPATTERNS_H_
#define FIDKIT_TESTPATTERNS_H_

#include <string>
#include <variant>

#include "fidkit/image.h"

namespace fidkit {

struct CircleOutline {
  double radius = 100.0;
  double thickness = 1.0;
};

struct Checkerboard {
  // Full spatial period in pixels; period 2 alternates every pixel.
  int period = 2;
};

// v(r) = 127.5 (1 + cos(k r^2)), with k chosen so the local frequency
// k r / pi reaches max_frequency (cycles/pixel) at the farthest corner.
struct ZonePlate {
  double max_frequency = 0.5;
};

struct Pattern {
  std::variant<CircleOutline, Checkerboard, ZonePlate> kind;
  int width = 256;
  int height = 256;

  std::string id() const;
};

// Circles are centered at the continuous point (w/2, h/2) with pixel centers
// at half-integers; the zone plate's r = 0 falls on pixel (w/2, h/2).
// Throws if the pattern cannot be represented on the canvas.
Image8 generate(const Pattern& pattern);

// Fraction of 360 samples on the ideal ring (centered, radius in output
// pixels) whose 3x3 neighborhood max stays below 10% of the image max.
template <typename Scalar>
double ring_gap_fraction(const Image<Scalar>& img, double radius_scaled);

// Mean squared deviation from the global mean over all samples.
template <typename Scalar>
double aliasing_energy(const Image<Scalar>& img);

inline constexpr int kRingSamples = 360;
inline constexpr double kRingGapThreshold = 0.10;

extern template double ring_gap_fraction(const Image8&, double);
extern template double ring_gap_fraction(const ImageF&, double);
extern template double aliasing_energy(const Image8&);
extern template double aliasing_energy(const ImageF&);

}  // namespace fidkit

#endif  // FIDKIT_TESTPATTERNS_H_
