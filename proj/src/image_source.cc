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

#include "fidkit/image_source.h"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "fidkit/codec.h"
#include "fidkit/corpus.h"
#include "fidkit/error.h"

namespace fidkit {
namespace {

bool has_image_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::size_t parse_count(std::string_view s, const std::string& spec) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  FIDKIT_CHECK(ec == std::errc() && ptr == s.data() + s.size() && v > 0,
               "bad synthetic source '" + spec + "' (expected synthetic:<count>[:<size>])");
  return v;
}

}  // namespace

DirectorySource::DirectorySource(std::filesystem::path dir) : dir_(std::move(dir)) {
  FIDKIT_CHECK(std::filesystem::is_directory(dir_), "not a directory: " + dir_.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.is_regular_file() && has_image_extension(entry.path()))
      files_.push_back(entry.path());
  }
  std::sort(files_.begin(), files_.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
}

Image8 DirectorySource::load(std::size_t i) const { return read_image(files_.at(i)); }

std::string VectorSource::name(std::size_t i) const { return "image" + std::to_string(i); }

std::unique_ptr<ImageSource> open_source(const std::string& spec, std::uint64_t seed) {
  constexpr std::string_view kPrefix = "synthetic:";
  if (spec.rfind(kPrefix, 0) == 0) {
    std::string_view rest = std::string_view(spec).substr(kPrefix.size());
    const auto colon = rest.find(':');
    const std::size_t count = parse_count(rest.substr(0, colon), spec);
    int size = SyntheticCorpus::kDefaultSize;
    if (colon != std::string_view::npos)
      size = static_cast<int>(parse_count(rest.substr(colon + 1), spec));
    return std::make_unique<SyntheticCorpus>(count, seed, size);
  }
  return std::make_unique<DirectorySource>(spec);
}

}  // namespace fidkit
