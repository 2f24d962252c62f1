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

#ifndef FIDKIT_STATS_CACHE_H_
#define FIDKIT_STATS_CACHE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fidkit/stats.h"

namespace fidkit {

using Digest = std::array<std::uint8_t, 32>;

// On-disk Gaussian statistics, little-endian throughout:
//
//   "CFID"              4 bytes magic
//   version             u8, = 1
//   extractor id        u32 byte length, then UTF-8 bytes
//   extractor checksum  32 bytes (SHA-256)
//   D                   u32
//   N                   u64
//   mean                D x f64
//   cov                 D x D x f64, row-major
//
// Version 1 always stores the N - 1 covariance.
struct StatsCache {
  std::string extractor_id;
  Digest extractor_checksum{};
  GaussianStats stats;
};

inline constexpr std::uint8_t kStatsCacheVersion = 1;

std::vector<std::uint8_t> encode_stats_cache(const StatsCache& cache);
StatsCache decode_stats_cache(std::span<const std::uint8_t> bytes);

bool looks_like_stats_cache(const std::filesystem::path& path);
void write_stats_cache(const std::filesystem::path& path, const StatsCache& cache);
StatsCache read_stats_cache(const std::filesystem::path& path);

Digest sha256(std::span<const std::uint8_t> bytes);
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace fidkit

#endif  // FIDKIT_STATS_CACHE_H_
