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

#include <fstream>

#include "fidkit/codec.h"
#include "fidkit/features.h"

#ifdef FIDKIT_HAVE_OPENCV_DNN
#include <mutex>

#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>
#endif

namespace fidkit {

#ifdef FIDKIT_HAVE_OPENCV_DNN
namespace {

class InceptionExtractor final : public FeatureExtractor {
 public:
  explicit InceptionExtractor(const std::filesystem::path& model_path)
      : checksum_(sha256(read_file(model_path))),
        net_(cv::dnn::readNet(model_path.string())) {
    FIDKIT_CHECK(!net_.empty(), "could not load Inception graph from " + model_path.string());
    net_.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
    net_.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
  }

  std::string id() const override { return "inception-v3-pool3"; }
  int dim() const override { return kInceptionDim; }
  std::optional<int> input_size() const override { return kInceptionInputSize; }
  Digest checksum() const override { return checksum_; }

  Eigen::VectorXd features(const ImageF& scaled) const override {
    const int side = kInceptionInputSize;
    FIDKIT_CHECK(scaled.width() == side && scaled.height() == side,
                 "inception input must be 299x299");
    const int shape[4] = {1, 3, side, side};
    cv::Mat blob(4, shape, CV_32F);
    float* dst = blob.ptr<float>();
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) *dst++ = scaled(x, y, c);

    cv::Mat out;
    {
      // cv::dnn::Net::forward mutates internal buffers.
      std::lock_guard<std::mutex> lock(mu_);
      net_.setInput(blob);
      out = net_.forward().clone();
    }
    FIDKIT_CHECK(static_cast<int>(out.total()) == kInceptionDim,
                 "inception graph produced " + std::to_string(out.total()) +
                     " values, expected 2048 pool features");
    Eigen::VectorXd f(kInceptionDim);
    const float* src = out.ptr<float>();
    for (int i = 0; i < kInceptionDim; ++i) f(i) = src[i];
    return f;
  }

 private:
  Digest checksum_;
  mutable cv::dnn::Net net_;
  mutable std::mutex mu_;
};

}  // namespace

bool inception_backend_available() { return true; }

std::unique_ptr<FeatureExtractor> make_inception_extractor(
    const std::filesystem::path& model_path) {
  FIDKIT_CHECK(std::filesystem::is_regular_file(model_path),
               "inception model file not found: " + model_path.string() +
                   " (pass --model <path> or set " + kInceptionModelEnv + ")");
  try {
    return std::make_unique<InceptionExtractor>(model_path);
  } catch (const cv::Exception& e) {
    throw Error("could not load Inception graph " + model_path.string() + ": " + e.what());
  }
}

#else

bool inception_backend_available() { return false; }

std::unique_ptr<FeatureExtractor> make_inception_extractor(
    const std::filesystem::path& model_path) {
  FIDKIT_CHECK(std::filesystem::is_regular_file(model_path),
               "inception model file not found: " + model_path.string() +
                   " (pass --model <path> or set " + kInceptionModelEnv + ")");
  throw Error("this build has no Inception backend; reconfigure with "
              "-DFIDKIT_WITH_OPENCV_DNN=ON and OpenCV's dnn module installed");
}

#endif

}  // namespace fidkit
