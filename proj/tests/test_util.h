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

#ifndef FIDKIT_TESTS_TEST_UTIL_H_
#define FIDKIT_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "fidkit/image.h"
#include "fidkit/rng.h"
#include "fidkit/stats.h"

namespace fidkit::testing {

inline Image8 random_image8(Rng& rng, int w, int h) {
  Image8 img(w, h);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

inline ImageF random_imagef(Rng& rng, int w, int h, double lo = 0.0, double hi = 255.0) {
  ImageF img(w, h);
  for (auto& v : img.data()) v = static_cast<float>(rng.uniform(lo, hi));
  return img;
}

inline FeatureMatrix random_features(Rng& rng, int n, int d, double scale = 1.0,
                                     double shift = 0.0) {
  FeatureMatrix m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = shift + scale * rng.normal();
  return m;
}

// A x A^T + 0.1 I with Gaussian A, so well conditioned.
inline Eigen::MatrixXd random_spd(Rng& rng, int d) {
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  Eigen::MatrixXd s = a * a.transpose() / d;
  s.diagonal().array() += 0.1;
  return 0.5 * (s + s.transpose());
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("fidkit-" + tag + "-" + std::to_string(Rng(std::random_device{}()).next()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fidkit::testing

#endif  // FIDKIT_TESTS_TEST_UTIL_H_
