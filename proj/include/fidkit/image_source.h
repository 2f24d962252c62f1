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

#ifndef FIDKIT_IMAGE_SOURCE_H_
#define FIDKIT_IMAGE_SOURCE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "fidkit/image.h"

namespace fidkit {

// An ordered, random-access collection of 8-bit images. load() must be
// safe to call concurrently.
class ImageSource {
 public:
  virtual ~ImageSource() = default;
  virtual std::size_t size() const = 0;
  virtual std::string name(std::size_t i) const = 0;
  virtual Image8 load(std::size_t i) const = 0;
  virtual std::string id() const = 0;
};

// PNG/JPEG files in one directory (non-recursive), sorted by filename.
class DirectorySource final : public ImageSource {
 public:
  explicit DirectorySource(std::filesystem::path dir);

  std::size_t size() const override { return files_.size(); }
  std::string name(std::size_t i) const override { return files_[i].filename().string(); }
  Image8 load(std::size_t i) const override;
  std::string id() const override { return dir_.string(); }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

class VectorSource final : public ImageSource {
 public:
  explicit VectorSource(std::vector<Image8> images, std::string id = "memory")
      : images_(std::move(images)), id_(std::move(id)) {}

  std::size_t size() const override { return images_.size(); }
  std::string name(std::size_t i) const override;
  Image8 load(std::size_t i) const override { return images_.at(i); }
  std::string id() const override { return id_; }

 private:
  std::vector<Image8> images_;
  std::string id_;
};

// "synthetic:<count>[:<size>]" builds a SyntheticCorpus with `seed`; any
// other string is a directory.
std::unique_ptr<ImageSource> open_source(const std::string& spec, std::uint64_t seed);

}  // namespace fidkit

#endif  // FIDKIT_IMAGE_SOURCE_H_
