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

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "fidkit/codec.h"
#include "test_util.h"

namespace fidkit {
namespace {

const ToyExtractor& toy() { return toy_extractor_spec(); }

std::string feature_digest(const Eigen::VectorXd& f) {
  std::vector<std::uint8_t> bytes;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(f(i));
    for (int k = 0; k < 8; ++k) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
  return to_hex(sha256(bytes));
}

// Pretends to be a fixed-size network.
class FixedSizeExtractor final : public FeatureExtractor {
 public:
  std::string id() const override { return "fixed"; }
  int dim() const override { return 2; }
  std::optional<int> input_size() const override { return 8; }
  Digest checksum() const override { return {}; }
  Eigen::VectorXd features(const ImageF& img) const override {
    return Eigen::Vector2d(img.pixels().mean(), img.pixels().maxCoeff());
  }
};

TEST(ToyExtractorTest, ProjectionFromDocumentedStream) {
  Rng rng(42);
  const double scale = 1.0 / std::sqrt(3072.0);
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 3072; ++c)
      ASSERT_EQ(toy().projection()(r, c), rng.normal() * scale) << r << "," << c;
  EXPECT_EQ(to_hex(toy().checksum()),
            "5d64c310cc4446a8bd7ad9ec9859f05df4432a1500bf105741e1615de3347fd9");
  EXPECT_EQ(toy().id(), "toy-v1");
  EXPECT_EQ(toy().dim(), 64);
}

TEST(ToyExtractorTest, BlackImageGolden) {
  const Eigen::VectorXd f = toy().features(scale_for_extractor(ImageF(32, 32)));
  const Eigen::VectorXd expect = (-toy().projection().rowwise().sum()).array().tanh().matrix();
  EXPECT_LT((f - expect).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(feature_digest(f),
            "19ffeba7300e21c95b0f5bac0e0c10f6aa6673750b2ea50c481b85b6ad60263d");
  // Any size of black image resizes to the same input.
  EXPECT_EQ(feature_digest(toy().features(scale_for_extractor(ImageF(299, 299)))),
            feature_digest(f));
}

TEST(ToyExtractorTest, RangeAndSensitivity) {
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const Image8 img = testing::random_image8(rng, 40 + trial, 37);
    const ImageF scaled = scale_for_extractor(image_cast<float>(img));
    const Eigen::VectorXd f = toy().features(scaled);
    ASSERT_EQ(f.size(), 64);
    EXPECT_TRUE(f.allFinite());
    EXPECT_LT(f.cwiseAbs().maxCoeff(), 1.0);
    EXPECT_EQ(toy().features(scaled), f);

    Image8 shifted = img;
    for (auto& v : shifted.data()) v = v == 255 ? 254 : v + 1;
    EXPECT_NE(toy().features(scale_for_extractor(image_cast<float>(shifted))), f);
  }
}

// ||f(x) - f(y)|| <= C ||x - y|| in 8-bit pixel units for 32x32 inputs, where
// C = sigma_max(R) / 127.5 since tanh is 1-Lipschitz and the resize is the
// identity at 32x32.
TEST(ToyExtractorTest, LipschitzConstant) {
  constexpr double kLipschitz32 = 0.0088869181139143282;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(toy().projection() *
                                                    toy().projection().transpose());
  EXPECT_NEAR(std::sqrt(es.eigenvalues().maxCoeff()) / 127.5, kLipschitz32, 1e-12);

  Rng rng(19);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const ImageF a = testing::random_imagef(rng, 32, 32);
    ImageF b = a;
    const double amp = trial < 25 ? 1.0 : 60.0;
    for (auto& v : b.data()) v += static_cast<float>(amp * rng.normal());
    const double dx = (a.pixels() - b.pixels()).cast<double>().matrix().norm();
    const double df = (toy().features(scale_for_extractor(a)) -
                       toy().features(scale_for_extractor(b))).norm();
    worst = std::max(worst, df / dx);
  }
  EXPECT_LE(worst, kLipschitz32 * (1 + 1e-9));
  EXPECT_GT(worst, 0.0);
}

TEST(ExtractTest, RowsFollowInputOrder) {
  Rng rng(4);
  std::vector<ImageF> imgs;
  for (int i = 0; i < 6; ++i)
    imgs.push_back(scale_for_extractor(image_cast<float>(testing::random_image8(rng, 20, 20))));
  const FeatureMatrix f = extract(imgs, toy());
  std::vector<ImageF> rev(imgs.rbegin(), imgs.rend());
  const FeatureMatrix g = extract(rev, toy());
  for (int i = 0; i < 6; ++i) EXPECT_EQ(g.row(i), f.row(5 - i));
}

TEST(ExtractTest, SizeMismatchThrows) {
  const FixedSizeExtractor fixed;
  const std::vector<ImageF> ok{ImageF(8, 8)}, bad{ImageF(9, 8)};
  EXPECT_EQ(extract(ok, fixed).rows(), 1);
  EXPECT_THROW(extract(bad, fixed), Error);
}

TEST(PreprocessTest, IdentityChainScales) {
  Rng rng(6);
  const Image8 img = testing::random_image8(rng, 16, 12);
  PreprocessChain chain;
  chain.fid_resize = {Resizer{}, 16, 12};
  const ImageF out = preprocess(img, chain);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x)
      for (int c = 0; c < 3; ++c) EXPECT_EQ(out(x, y, c), img(x, y, c) / 127.5f - 1.0f);
}

TEST(PreprocessTest, StagesRunInOrder) {
  Rng rng(8);
  const ImageF img = testing::random_imagef(rng, 64, 48, -10.0, 270.0);
  PreprocessChain chain;
  chain.data_resize = ResizeSpec{Resizer::Parse("bilinear-noaa"), 40, 30};
  chain.quantize = true;
  chain.compression = CompressionSpec::Jpeg(80);
  chain.fid_resize = {Resizer::Parse("bicubic-aa"), 29, 29};

  const ImageF step1 = resize(img, *chain.data_resize);
  const Image8 step2 = codec_roundtrip(quantize(step1), *chain.compression);
  const ImageF expect = scale_for_extractor(resize(step2, chain.fid_resize));
  EXPECT_EQ(preprocess(img, chain), expect);
  EXPECT_EQ(storage_stage(img, chain), image_cast<float>(step2));

  chain.compression.reset();
  chain.quantize = false;
  EXPECT_EQ(preprocess(img, chain),
            scale_for_extractor(resize(resize(img, *chain.data_resize), chain.fid_resize)));
}

TEST(PreprocessTest, Validation) {
  PreprocessChain chain;
  chain.quantize = false;
  chain.compression = CompressionSpec::Png();
  EXPECT_THROW(chain.validate(), Error);
  EXPECT_THROW(preprocess(Image8(4, 4), chain), Error);

  PreprocessChain sized;
  sized.fid_resize = {Resizer{}, 9, 9};
  const FixedSizeExtractor fixed;
  EXPECT_THROW(sized.validate(&fixed), Error);
  sized.fid_resize = {Resizer{}, 8, 8};
  EXPECT_NO_THROW(sized.validate(&fixed));
  EXPECT_NO_THROW(PreprocessChain{}.validate(&toy()));
}

TEST(PreprocessTest, ChainId) {
  PreprocessChain chain;
  EXPECT_EQ(chain.id(),
            "data=none;quantize=yes;compression=none;fid=bicubic-aa@299x299;scaling=x/127.5-1");
  chain.data_resize = ResizeSpec{Resizer::Parse("nearest"), 64, 64};
  chain.compression = CompressionSpec::Jpeg(90);
  EXPECT_EQ(chain.id(),
            "data=nearest@64x64;quantize=yes;compression=jpeg-90;fid=bicubic-aa@299x299;"
            "scaling=x/127.5-1");
}

TEST(MakeExtractorTest, Kinds) {
  EXPECT_EQ(make_extractor("toy", std::nullopt)->id(), "toy-v1");
  EXPECT_THROW(make_extractor("vgg", std::nullopt), Error);
  EXPECT_THROW(make_extractor("inception", std::filesystem::path("/nonexistent/model.onnx")),
               Error);
  const char* saved = std::getenv(kInceptionModelEnv);
  const std::string keep = saved ? saved : "";
  ::unsetenv(kInceptionModelEnv);
  try {
    make_extractor("inception", std::nullopt);
    ADD_FAILURE() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(kInceptionModelEnv), std::string::npos);
  }
  if (saved) ::setenv(kInceptionModelEnv, keep.c_str(), 1);
}

}  // namespace
}  // namespace fidkit
