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

#include "fidkit/features.h"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "fidkit/codec.h"
#include "fidkit/rng.h"

namespace fidkit {

ToyExtractor::ToyExtractor() : projection_(kDim, kInputDim) {
  Rng rng(kSeed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(kInputDim));
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kInputDim; ++c) projection_(r, c) = rng.normal() * scale;

  std::vector<std::uint8_t> bytes;
  const std::string tag = id();
  bytes.insert(bytes.end(), tag.begin(), tag.end());
  for (int r = 0; r < kDim; ++r) {
    for (int c = 0; c < kInputDim; ++c) {
      const auto bits = std::bit_cast<std::uint64_t>(projection_(r, c));
      for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
  }
  checksum_ = sha256(bytes);
}

Eigen::VectorXd ToyExtractor::features(const ImageF& scaled) const {
  const ImageF small =
      resize(scaled, ResizeSpec{{FilterKind::kBilinear, true}, kSide, kSide});
  Eigen::VectorXd flat(kInputDim);
  const float* p = small.pixels().data();
  for (int i = 0; i < kInputDim; ++i) flat(i) = static_cast<double>(p[i]);
  return (projection_ * flat).array().tanh().matrix();
}

const ToyExtractor& toy_extractor_spec() {
  static const ToyExtractor kToy;
  return kToy;
}

std::shared_ptr<const FeatureExtractor> make_extractor(
    std::string_view kind, const std::optional<std::filesystem::path>& model_path) {
  if (kind == "toy") {
    return std::shared_ptr<const FeatureExtractor>(&toy_extractor_spec(),
                                                   [](const FeatureExtractor*) {});
  }
  if (kind == "inception") {
    std::optional<std::filesystem::path> path = model_path;
    if (!path) {
      if (const char* env = std::getenv(kInceptionModelEnv); env && *env) path = env;
    }
    if (!path) {
      throw Error(std::string("inception extractor needs a model file: pass --model "
                              "<path> or set ") +
                  kInceptionModelEnv +
                  " to a serialized InceptionV3 graph (ONNX or TensorFlow .pb) that "
                  "maps a 1x3x299x299 input in [-1, 1] to the 2048-d pool features");
    }
    return make_inception_extractor(*path);
  }
  throw Error("unknown extractor '" + std::string(kind) + "' (expected toy or inception)");
}

void PreprocessChain::validate(const FeatureExtractor* extractor) const {
  if (data_resize) data_resize->validate();
  fid_resize.validate();
  FIDKIT_CHECK(!compression || quantize,
               "compression requires quantized pixels; drop --no-quantize or the "
               "compression setting");
  if (extractor && extractor->input_size()) {
    const int side = *extractor->input_size();
    FIDKIT_CHECK(fid_resize.out_width == side && fid_resize.out_height == side,
                 "extractor " + extractor->id() + " needs " + std::to_string(side) + "x" +
                     std::to_string(side) + " input but the FID resize targets " +
                     std::to_string(fid_resize.out_width) + "x" +
                     std::to_string(fid_resize.out_height));
  }
}

std::string PreprocessChain::id() const {
  std::string s = "data=" + (data_resize ? data_resize->id() : std::string("none"));
  s += ";quantize=" + std::string(quantize ? "yes" : "no");
  s += ";compression=" + (compression ? compression->id() : std::string("none"));
  s += ";fid=" + fid_resize.id();
  s += ";scaling=" + std::string(kInputScaling);
  return s;
}

ImageF scale_for_extractor(ImageF img) {
  img.pixels() = img.pixels() / 127.5f - 1.0f;
  return img;
}

template <typename Scalar>
ImageF storage_stage(const Image<Scalar>& img, const PreprocessChain& chain) {
  chain.validate();
  ImageF current = image_cast<float>(img);
  if (chain.data_resize) current = resize(current, *chain.data_resize);
  if (chain.quantize) {
    Image8 stored = quantize(current);
    if (chain.compression) stored = codec_roundtrip(stored, *chain.compression);
    current = image_cast<float>(stored);
  }
  return current;
}

ImageF extractor_stage(const ImageF& stored, const PreprocessChain& chain) {
  return scale_for_extractor(resize(stored, chain.fid_resize));
}

template <typename Scalar>
ImageF preprocess(const Image<Scalar>& img, const PreprocessChain& chain) {
  return extractor_stage(storage_stage(img, chain), chain);
}

FeatureMatrix extract(std::span<const ImageF> images, const FeatureExtractor& extractor) {
  FeatureMatrix out(static_cast<Eigen::Index>(images.size()), extractor.dim());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ImageF& img = images[i];
    if (auto side = extractor.input_size()) {
      FIDKIT_CHECK(img.width() == *side && img.height() == *side,
                   "extract: image " + std::to_string(i) + " is " +
                       std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                       ", extractor " + extractor.id() + " needs " +
                       std::to_string(*side) + "x" + std::to_string(*side));
    }
    const Eigen::VectorXd f = extractor.features(img);
    FIDKIT_CHECK(f.size() == extractor.dim() && f.allFinite(),
                 "extract: extractor returned a malformed feature vector");
    out.row(static_cast<Eigen::Index>(i)) = f.transpose();
  }
  return out;
}

template ImageF preprocess(const Image8&, const PreprocessChain&);
template ImageF preprocess(const ImageF&, const PreprocessChain&);
template ImageF storage_stage(const Image8&, const PreprocessChain&);
template ImageF storage_stage(const ImageF&, const PreprocessChain&);

}  // namespace fidkit
