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

#ifndef FIDKIT_CORPUS_H_
#define FIDKIT_CORPUS_H_

#include <cstdint>

#include "fidkit/image_source.h"

namespace fidkit {

// Procedural stand-in for a photo dataset. Each image is a seeded mix of a
// color gradient, multi-octave value noise, concentric sinusoidal rings and
// checkered patches, so it carries energy across the whole spectrum.
// Image i depends only on (seed, i, size).
class SyntheticCorpus final : public ImageSource {
 public:
  static constexpr int kDefaultSize = 256;
  static constexpr int kDefaultCount = 500;

  SyntheticCorpus(std::size_t count, std::uint64_t seed, int size = kDefaultSize);

  std::size_t size() const override { return count_; }
  std::string name(std::size_t i) const override;
  Image8 load(std::size_t i) const override;
  std::string id() const override;

  int image_size() const { return size_; }

 private:
  std::size_t count_;
  std::uint64_t seed_;
  int size_;
};

}  // namespace fidkit

#endif  // FIDKIT_CORPUS_H_
