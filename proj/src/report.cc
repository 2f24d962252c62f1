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

#include "fidkit/report.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "fidkit/error.h"

namespace fidkit {

Json chain_to_json(const PreprocessChain& chain) {
  Json j;
  j["id"] = chain.id();
  j["data_resize"] = chain.data_resize ? Json(chain.data_resize->id()) : Json(nullptr);
  j["quantize"] = chain.quantize;
  j["compression"] = chain.compression ? Json(chain.compression->id()) : Json(nullptr);
  j["fid_resize"] = chain.fid_resize.id();
  j["scaling"] = kInputScaling;
  return j;
}

Json SideProvenance::to_json() const {
  Json j;
  j["source"] = source;
  j["chain"] = chain ? *chain : Json(nullptr);
  j["extractor"] = {{"id", extractor_id}, {"checksum", extractor_checksum}};
  j["count"] = count;
  j["skipped"] = skipped;
  return j;
}

SideProvenance SideProvenance::from_json(const Json& j) {
  SideProvenance p;
  p.source = j.at("source").get<std::string>();
  if (!j.at("chain").is_null()) p.chain = j.at("chain");
  p.extractor_id = j.at("extractor").at("id").get<std::string>();
  p.extractor_checksum = j.at("extractor").at("checksum").get<std::string>();
  p.count = j.at("count").get<std::uint64_t>();
  p.skipped = j.value("skipped", std::uint64_t{0});
  return p;
}

Json MetricReport::to_json() const {
  Json j;
  j["metric"] = metric;
  j["value"] = value;
  if (metric == "fid") {
    j["epsilon"] = epsilon;
    j["ddof"] = ddof;
  } else {
    j["kid_mode"] = kid_mode;
  }
  j["reference"] = reference.to_json();
  j["evaluated"] = evaluated.to_json();
  return j;
}

MetricReport MetricReport::from_json(const Json& j) {
  try {
    MetricReport r;
    r.metric = j.at("metric").get<std::string>();
    FIDKIT_CHECK(r.metric == "fid" || r.metric == "kid", "unknown metric '" + r.metric + "'");
    r.value = j.at("value").get<double>();
    r.epsilon = j.value("epsilon", 0.0);
    r.ddof = j.value("ddof", 1);
    r.kid_mode = j.value("kid_mode", std::string());
    r.reference = SideProvenance::from_json(j.at("reference"));
    r.evaluated = SideProvenance::from_json(j.at("evaluated"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed metric report: ") + e.what());
  }
}

std::vector<std::string> provenance_differences(const MetricReport& a, const MetricReport& b) {
  std::vector<std::string> diffs;
  auto check = [&](const std::string& field, const Json& x, const Json& y) {
    if (x != y) diffs.push_back(field + ": " + x.dump() + " vs " + y.dump());
  };
  check("metric", a.metric, b.metric);
  if (a.metric == "kid" && b.metric == "kid") check("kid_mode", a.kid_mode, b.kid_mode);
  if (a.metric == "fid" && b.metric == "fid") check("ddof", a.ddof, b.ddof);
  const std::pair<const char*, std::pair<const SideProvenance*, const SideProvenance*>> sides[] = {
      {"reference", {&a.reference, &b.reference}},
      {"evaluated", {&a.evaluated, &b.evaluated}}};
  for (const auto& [name, pair] : sides) {
    const auto& [x, y] = pair;
    const std::string prefix = std::string(name) + ".";
    if (x->chain && y->chain && *x->chain != *y->chain) {
      diffs.push_back(prefix + "chain: " + x->chain->value("id", x->chain->dump()) + " vs " +
                      y->chain->value("id", y->chain->dump()));
    }
    if (!x->chain || !y->chain)
      diffs.push_back(prefix + "chain: unknown preprocessing on at least one side");
    check(prefix + "extractor.id", x->extractor_id, y->extractor_id);
    check(prefix + "extractor.checksum", x->extractor_checksum, y->extractor_checksum);
  }
  return diffs;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  FIDKIT_CHECK(cells.size() == header_.size(), "csv row has the wrong number of cells");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

Json table_to_json(const CsvTable& table) {
  Json out = Json::array();
  for (const auto& row : table.rows()) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& cell = row[i];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v)) {
        obj[table.header()[i]] = v;
      } else {
        obj[table.header()[i]] = cell;
      }
    }
    out.push_back(std::move(obj));
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  FIDKIT_CHECK(f.good(), "cannot write " + path.string());
  f << text;
  FIDKIT_CHECK(f.good(), "error writing " + path.string());
}

}  // namespace fidkit
