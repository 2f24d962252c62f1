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

#include "fidkit/stats_cache.h"

#include <bit>
#include <cstring>
#include <fstream>

#include <openssl/sha.h>

#include "fidkit/codec.h"

namespace fidkit {
namespace {

constexpr char kMagic[4] = {'C', 'F', 'I', 'D'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> bytes(std::size_t n) {
    FIDKIT_CHECK(n <= in_.size() - pos_, "stats cache: truncated file");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return bytes(1)[0]; }
  std::uint32_t u32() {
    auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64() {
    auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_stats_cache(const StatsCache& cache) {
  const GaussianStats& g = cache.stats;
  g.validate();
  Writer w;
  w.bytes(kMagic, 4);
  w.u8(kStatsCacheVersion);
  w.u32(static_cast<std::uint32_t>(cache.extractor_id.size()));
  w.bytes(cache.extractor_id.data(), cache.extractor_id.size());
  w.bytes(cache.extractor_checksum.data(), cache.extractor_checksum.size());
  const int d = g.dim();
  w.u32(static_cast<std::uint32_t>(d));
  w.u64(g.count);
  for (int i = 0; i < d; ++i) w.f64(g.mean(i));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) w.f64(g.cov(r, c));
  return w.take();
}

StatsCache decode_stats_cache(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  FIDKIT_CHECK(bytes.size() >= 5 && std::memcmp(r.bytes(4).data(), kMagic, 4) == 0,
               "stats cache: bad magic (not a CFID file)");
  const std::uint8_t version = r.u8();
  FIDKIT_CHECK(version == kStatsCacheVersion,
               "stats cache: unsupported version " + std::to_string(version));
  StatsCache cache;
  const std::uint32_t id_len = r.u32();
  auto id = r.bytes(id_len);
  cache.extractor_id.assign(id.begin(), id.end());
  auto sum = r.bytes(32);
  std::copy(sum.begin(), sum.end(), cache.extractor_checksum.begin());
  const std::uint32_t d = r.u32();
  cache.stats.count = r.u64();
  const std::uint64_t expected = 8ull * d + 8ull * d * d;
  FIDKIT_CHECK(r.remaining() == expected,
               "stats cache: payload size does not match D=" + std::to_string(d));
  cache.stats.mean.resize(d);
  cache.stats.cov.resize(d, d);
  for (std::uint32_t i = 0; i < d; ++i) cache.stats.mean(i) = r.f64();
  for (std::uint32_t row = 0; row < d; ++row)
    for (std::uint32_t col = 0; col < d; ++col) cache.stats.cov(row, col) = r.f64();
  cache.stats.validate();
  return cache;
}

bool looks_like_stats_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  return in && in.read(magic, 4) && std::memcmp(magic, kMagic, 4) == 0;
}

void write_stats_cache(const std::filesystem::path& path, const StatsCache& cache) {
  write_file(path, encode_stats_cache(cache));
}

StatsCache read_stats_cache(const std::filesystem::path& path) {
  try {
    return decode_stats_cache(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Digest sha256(std::span<const std::uint8_t> bytes) {
  Digest out;
  SHA256(bytes.data(), bytes.size(), out.data());
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 15]);
  }
  return s;
}

}  // namespace fidkit
