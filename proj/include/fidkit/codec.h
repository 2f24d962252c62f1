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

#ifndef FIDKIT_CODEC_H_
#define FIDKIT_CODEC_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fidkit/image.h"
#include "fidkit/pixel.h"

namespace fidkit {

using Bytes = std::vector<std::uint8_t>;

// PNG via libpng, baseline JPEG via libjpeg with the library's standard
// quality-to-quantization-table scaling (4:2:0 chroma, islow DCT).
Bytes encode_png(const Image8& img);
Bytes encode_jpeg(const Image8& img, int quality);

// Decodes PNG or JPEG, sniffed from the leading bytes. Grayscale and alpha
// inputs come back as 3-channel RGB (alpha composited onto black).
Image8 decode_image(std::span<const std::uint8_t> bytes);

// Encode then decode. PNG is bit-exact; JPEG is lossy.
Image8 codec_roundtrip(const Image8& img, const CompressionSpec& spec);

Image8 read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image8& img);
void write_jpeg(const std::filesystem::path& path, const Image8& img, int quality);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace fidkit

#endif  // FIDKIT_CODEC_H_
