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

#ifndef FIDKIT_FEATURES_H_
#define FIDKIT_FEATURES_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "fidkit/image.h"
#include "fidkit/pixel.h"
#include "fidkit/resample.h"
#include "fidkit/stats.h"
#include "fidkit/stats_cache.h"

namespace fidkit {

inline constexpr int kInceptionInputSize = 299;
inline constexpr int kInceptionDim = 2048;
inline constexpr const char* kInceptionModelEnv = "FIDKIT_INCEPTION_MODEL";

// Extractors consume images already mapped to [-1, 1] by x / 127.5 - 1.
inline constexpr const char* kInputScaling = "x/127.5-1";

class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;

  virtual std::string id() const = 0;
  virtual int dim() const = 0;
  // Required square input side, or nullopt when any size is accepted.
  virtual std::optional<int> input_size() const = 0;
  // Identifies the exact weights; scores from different checksums are
  // incomparable.
  virtual Digest checksum() const = 0;

  virtual Eigen::VectorXd features(const ImageF& scaled) const = 0;
};

// Desk-scale stand-in for InceptionV3: bilinear-aa resize to 32x32, flatten
// (row, column, channel) to 3072 values, multiply by a fixed 64 x 3072
// Gaussian projection scaled by 1/sqrt(3072), then tanh.
//
// The projection is filled row-major from Rng(42).normal(), i.e.
// std::mt19937_64 seeded with 42 and Box-Muller on 53-bit uniforms.
class ToyExtractor final : public FeatureExtractor {
 public:
  static constexpr int kSide = 32;
  static constexpr int kInputDim = kSide * kSide * 3;
  static constexpr int kDim = 64;
  static constexpr std::uint64_t kSeed = 42;

  ToyExtractor();

  std::string id() const override { return "toy-v1"; }
  int dim() const override { return kDim; }
  std::optional<int> input_size() const override { return std::nullopt; }
  Digest checksum() const override { return checksum_; }
  Eigen::VectorXd features(const ImageF& scaled) const override;

  const Eigen::MatrixXd& projection() const { return projection_; }

 private:
  Eigen::MatrixXd projection_;
  Digest checksum_;
};

// Shared immutable instance.
const ToyExtractor& toy_extractor_spec();

// Pretrained InceptionV3 pool features (D = 2048) from a serialized graph
// (ONNX or TensorFlow .pb) executed by OpenCV DNN. The graph must take a
// 1x3x299x299 input and produce the 2048-d pooled vector. Throws if the
// file is missing or the build has no DNN backend.
std::unique_ptr<FeatureExtractor> make_inception_extractor(
    const std::filesystem::path& model_path);

bool inception_backend_available();

// "toy" or "inception"; the model path falls back to $FIDKIT_INCEPTION_MODEL.
std::shared_ptr<const FeatureExtractor> make_extractor(
    std::string_view kind, const std::optional<std::filesystem::path>& model_path);

// Optional data resize, optional quantization, optional codec round trip,
// then the resize to the extractor's input and scaling. The first three
// steps model how a dataset is stored on disk.
struct PreprocessChain {
  std::optional<ResizeSpec> data_resize;
  bool quantize = true;
  std::optional<CompressionSpec> compression;
  ResizeSpec fid_resize{Resizer{}, kInceptionInputSize, kInceptionInputSize};

  // Compression needs quantized pixels; fid_resize must match a fixed-size
  // extractor when one is given.
  void validate(const FeatureExtractor* extractor = nullptr) const;
  std::string id() const;
  bool operator==(const PreprocessChain&) const = default;
};

template <typename Scalar>
ImageF preprocess(const Image<Scalar>& img, const PreprocessChain& chain);

// The two halves of preprocess(). storage_stage() stops after the codec and
// returns integral values whenever chain.quantize is set.
template <typename Scalar>
ImageF storage_stage(const Image<Scalar>& img, const PreprocessChain& chain);
ImageF extractor_stage(const ImageF& stored, const PreprocessChain& chain);

// Maps [0, 255] pixels to the extractor input convention.
ImageF scale_for_extractor(ImageF img);

// Row i is the feature vector of images[i].
FeatureMatrix extract(std::span<const ImageF> images, const FeatureExtractor& extractor);

extern template ImageF preprocess(const Image8&, const PreprocessChain&);
extern template ImageF preprocess(const ImageF&, const PreprocessChain&);
extern template ImageF storage_stage(const Image8&, const PreprocessChain&);
extern template ImageF storage_stage(const ImageF&, const PreprocessChain&);

}  // namespace fidkit

#endif  // FIDKIT_FEATURES_H_
