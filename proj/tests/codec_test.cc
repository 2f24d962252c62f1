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

#include "fidkit/codec.h"

#include <png.h>

#include <cstdio>

#include <gtest/gtest.h>

#include "fidkit/corpus.h"
#include "test_util.h"

namespace fidkit {
namespace {

TEST(CodecTest, PngRoundTripIsExact) {
  Rng rng(3);
  for (const auto& [w, h] : {std::pair{1, 1}, {7, 5}, {64, 33}}) {
    const Image8 img = testing::random_image8(rng, w, h);
    EXPECT_EQ(codec_roundtrip(img, CompressionSpec::Png()), img);
    const Bytes a = encode_png(img);
    EXPECT_EQ(encode_png(img), a);  // deterministic bytes
  }
}

TEST(CodecTest, ConstantGraySurvivesJpeg75) {
  const Image8 gray = Image8::Constant(64, 48, 128);
  const Image8 out = codec_roundtrip(gray, CompressionSpec::Jpeg(75));
  ASSERT_EQ(out.width(), 64);
  ASSERT_EQ(out.height(), 48);
  for (auto v : out.data()) {
    EXPECT_GE(v, 127);
    EXPECT_LE(v, 129);
  }
}

TEST(CodecTest, JpegQualityOrdersError) {
  const SyntheticCorpus corpus(4, 0, 96);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Image8 img = corpus.load(i);
    const double p100 = psnr(img, codec_roundtrip(img, CompressionSpec::Jpeg(100)));
    const double p90 = psnr(img, codec_roundtrip(img, CompressionSpec::Jpeg(90)));
    const double p75 = psnr(img, codec_roundtrip(img, CompressionSpec::Jpeg(75)));
    EXPECT_GE(p100, 45.0);
    EXPECT_GT(p100, p90);
    EXPECT_GT(p90, p75);
  }
}

TEST(CodecTest, RejectsBadQualityAndGarbage) {
  const Image8 img(8, 8);
  EXPECT_THROW(encode_jpeg(img, 0), Error);
  EXPECT_THROW(encode_jpeg(img, 101), Error);
  const Bytes junk{1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_THROW(decode_image(junk), Error);
  Bytes truncated = encode_png(Image8::Constant(16, 16, 9));
  truncated.resize(truncated.size() / 2);
  EXPECT_THROW(decode_image(truncated), Error);
}

// Writes an 8-bit PNG in the given libpng format.
Bytes write_png_format(int w, int h, png_uint_32 format, const std::vector<std::uint8_t>& px) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = w;
  image.height = h;
  image.format = format;
  png_alloc_size_t size = 0;
  EXPECT_TRUE(png_image_write_to_memory(&image, nullptr, &size, 0, px.data(), 0, nullptr));
  Bytes out(size);
  EXPECT_TRUE(png_image_write_to_memory(&image, out.data(), &size, 0, px.data(), 0, nullptr));
  out.resize(size);
  return out;
}

TEST(CodecTest, GrayAndAlphaBecomeRgb) {
  const Image8 gray = decode_image(write_png_format(2, 1, PNG_FORMAT_GRAY, {10, 200}));
  ASSERT_EQ(gray.width(), 2);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(gray(0, 0, c), 10);
    EXPECT_EQ(gray(1, 0, c), 200);
  }
  // Fully opaque keeps the color; fully transparent goes to black.
  const Image8 rgba = decode_image(
      write_png_format(2, 1, PNG_FORMAT_RGBA, {200, 100, 50, 255, 200, 100, 50, 0}));
  EXPECT_EQ(rgba(0, 0, 0), 200);
  EXPECT_EQ(rgba(0, 0, 1), 100);
  EXPECT_EQ(rgba(0, 0, 2), 50);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(rgba(1, 0, c), 0);
}

TEST(CodecTest, FileRoundTrip) {
  testing::TempDir dir("codec");
  Rng rng(5);
  const Image8 img = testing::random_image8(rng, 20, 10);
  write_png(dir / "a.png", img);
  EXPECT_EQ(read_image(dir / "a.png"), img);
  write_jpeg(dir / "a.jpg", img, 95);
  const Image8 j = read_image(dir / "a.jpg");
  EXPECT_EQ(j.width(), 20);
  EXPECT_EQ(j.height(), 10);
  EXPECT_THROW(read_image(dir / "missing.png"), Error);
}

}  // namespace
}  // namespace fidkit
