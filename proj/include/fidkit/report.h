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

#ifndef FIDKIT_REPORT_H_
#define FIDKIT_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fidkit/features.h"

namespace fidkit {

using Json = nlohmann::ordered_json;

// Everything needed to tell whether two scores are comparable.
struct SideProvenance {
  std::string source;
  // Chain description; absent for a stats cache without a sidecar.
  std::optional<Json> chain;
  std::string extractor_id;
  std::string extractor_checksum;  // lowercase hex
  std::uint64_t count = 0;
  std::uint64_t skipped = 0;

  Json to_json() const;
  static SideProvenance from_json(const Json& j);
};

Json chain_to_json(const PreprocessChain& chain);

struct MetricReport {
  std::string metric;  // "fid" or "kid"
  double value = 0.0;
  SideProvenance reference;
  SideProvenance evaluated;
  double epsilon = 0.0;   // fid: diagonal regularization applied, 0 if none
  std::string kid_mode;   // kid: "full" or "subsets:<n>x<m>@seed=<s>"
  int ddof = 1;

  Json to_json() const;
  static MetricReport from_json(const Json& j);
};

// Provenance fields that differ between two reports; empty when the scores
// are comparable. Sources and counts are not provenance.
std::vector<std::string> provenance_differences(const MetricReport& a, const MetricReport& b);

// Header row plus rows of preformatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Array of row objects keyed by header; finite numeric cells become numbers.
Json table_to_json(const CsvTable& table);

// 9 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace fidkit

#endif  // FIDKIT_REPORT_H_
