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

#include "fidkit/resample.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fidkit {
namespace {

constexpr double kBicubicA = -0.5;

// Exact zeros at the nonzero integers; sin(pi k) only rounds to ~1e-16.
double sinc(double x) {
  if (x == 0.0) return 1.0;
  if (x == std::trunc(x)) return 0.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

int nearest_index(int i, double scale, int in_size) {
  const int j = static_cast<int>(std::floor((i + 0.5) * scale));
  return std::clamp(j, 0, in_size - 1);
}

}  // namespace

double base_support(FilterKind filter) {
  switch (filter) {
    case FilterKind::kNearest: return 0.0;
    case FilterKind::kBox: return 0.5;
    case FilterKind::kBilinear: return 1.0;
    case FilterKind::kBicubic: return 2.0;
    case FilterKind::kLanczos3: return 3.0;
  }
  return 0.0;
}

std::string_view filter_name(FilterKind filter) {
  switch (filter) {
    case FilterKind::kNearest: return "nearest";
    case FilterKind::kBox: return "box";
    case FilterKind::kBilinear: return "bilinear";
    case FilterKind::kBicubic: return "bicubic";
    case FilterKind::kLanczos3: return "lanczos3";
  }
  return "?";
}

double kernel_eval(FilterKind filter, double x) {
  const double ax = std::abs(x);
  switch (filter) {
    case FilterKind::kBox:
      return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
    case FilterKind::kBilinear:
      return std::max(0.0, 1.0 - ax);
    case FilterKind::kBicubic: {
      constexpr double a = kBicubicA;
      if (ax < 1.0) return ((a + 2.0) * ax - (a + 3.0)) * ax * ax + 1.0;
      if (ax < 2.0) return (((ax - 5.0) * ax + 8.0) * ax - 4.0) * a;
      return 0.0;
    }
    case FilterKind::kLanczos3:
      return ax < 3.0 ? sinc(x) * sinc(x / 3.0) : 0.0;
    case FilterKind::kNearest:
      break;
  }
  throw Error("kernel_eval: nearest has no kernel");
}

std::string Resizer::id() const {
  if (filter == FilterKind::kNearest) return "nearest";
  return std::string(filter_name(filter)) + (antialias ? "-aa" : "-noaa");
}

Resizer Resizer::Parse(std::string_view id) {
  if (id == "nearest") return {FilterKind::kNearest, false};
  for (FilterKind f : {FilterKind::kBox, FilterKind::kBilinear, FilterKind::kBicubic,
                       FilterKind::kLanczos3}) {
    const std::string name(filter_name(f));
    if (id == name + "-aa") return {f, true};
    if (id == name + "-noaa") return {f, false};
  }
  throw Error("unknown resizer id '" + std::string(id) +
              "' (expected one of bicubic-aa, bilinear-aa, lanczos3-aa, box-aa, "
              "bicubic-noaa, bilinear-noaa, nearest)");
}

const std::vector<Resizer>& standard_resizers() {
  static const std::vector<Resizer> kAll = {
      {FilterKind::kBicubic, true},   {FilterKind::kBilinear, true},
      {FilterKind::kLanczos3, true},  {FilterKind::kBox, true},
      {FilterKind::kBicubic, false},  {FilterKind::kBilinear, false},
      {FilterKind::kNearest, false},
  };
  return kAll;
}

void ResizeSpec::validate() const {
  FIDKIT_CHECK(out_width >= 1 && out_height >= 1,
               "resize target must be at least 1x1, got " + std::to_string(out_width) +
                   "x" + std::to_string(out_height));
}

std::string ResizeSpec::id() const {
  return resizer.id() + "@" + std::to_string(out_width) + "x" + std::to_string(out_height);
}

WeightTable build_weights(int in_size, int out_size, FilterKind filter, bool antialias) {
  FIDKIT_CHECK(in_size >= 1 && out_size >= 1, "build_weights: sizes must be >= 1");
  WeightTable table;
  table.in_size = in_size;
  table.out_size = out_size;
  table.first.resize(out_size);
  table.count.resize(out_size);
  table.offset.resize(out_size);

  const double scale = static_cast<double>(in_size) / out_size;
  const double filter_scale = antialias ? std::max(1.0, scale) : 1.0;
  const double support = base_support(filter) * filter_scale;

  std::vector<double> row;
  for (int i = 0; i < out_size; ++i) {
    const double center = (i + 0.5) * scale;
    int lo = 0, hi = -1;
    row.clear();
    if (filter != FilterKind::kNearest) {
      lo = std::max(0, static_cast<int>(std::ceil(center - support - 0.5)));
      hi = std::min(in_size - 1, static_cast<int>(std::floor(center + support - 0.5)));
      for (int j = lo; j <= hi; ++j) {
        row.push_back(kernel_eval(filter, (j + 0.5 - center) / filter_scale));
      }
      // Drop exact zeros at both ends so identity rows are a single tap.
      while (!row.empty() && row.back() == 0.0) { row.pop_back(); --hi; }
      std::size_t lead = 0;
      while (lead < row.size() && row[lead] == 0.0) ++lead;
      row.erase(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(lead));
      lo += static_cast<int>(lead);
    }
    double sum = 0.0;
    for (double w : row) sum += w;
    if (row.empty() || sum == 0.0) {
      lo = nearest_index(i, scale, in_size);
      row.assign(1, 1.0);
      sum = 1.0;
    }
    table.first[i] = lo;
    table.count[i] = static_cast<int>(row.size());
    table.offset[i] = static_cast<int>(table.weights.size());
    for (double w : row) table.weights.push_back(w / sum);
  }
  return table;
}

template <typename Scalar>
ImageF resize(const Image<Scalar>& img, const ResizeSpec& spec) {
  spec.validate();
  constexpr int C = ImageF::kChannels;
  const int in_w = img.width(), in_h = img.height();
  const int out_w = spec.out_width, out_h = spec.out_height;
  const auto& src = img.pixels();

  if (spec.resizer.filter == FilterKind::kNearest) {
    const double sx = static_cast<double>(in_w) / out_w;
    const double sy = static_cast<double>(in_h) / out_h;
    ImageF out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
      const int iy = nearest_index(y, sy, in_h);
      for (int x = 0; x < out_w; ++x) {
        const int ix = nearest_index(x, sx, in_w);
        for (int c = 0; c < C; ++c) out(x, y, c) = static_cast<float>(src(iy, ix * C + c));
      }
    }
    return out;
  }

  const WeightTable horiz =
      build_weights(in_w, out_w, spec.resizer.filter, spec.resizer.antialias);
  const WeightTable vert =
      build_weights(in_h, out_h, spec.resizer.filter, spec.resizer.antialias);
  using Buffer = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Buffer tmp(in_h, out_w * C);
  for (int y = 0; y < in_h; ++y) {
    const Scalar* in_row = src.row(y).data();
    double* tmp_row = tmp.row(y).data();
    for (int x = 0; x < out_w; ++x) {
      const double* w = horiz.weights.data() + horiz.offset[x];
      const Scalar* p = in_row + horiz.first[x] * C;
      double acc[C] = {0.0, 0.0, 0.0};
      for (int k = 0; k < horiz.count[x]; ++k) {
        for (int c = 0; c < C; ++c) acc[c] += w[k] * static_cast<double>(p[k * C + c]);
      }
      for (int c = 0; c < C; ++c) tmp_row[x * C + c] = acc[c];
    }
  }

  ImageF::Pixels out(out_h, out_w * C);
  Eigen::Array<double, 1, Eigen::Dynamic> acc(out_w * C);
  for (int y = 0; y < out_h; ++y) {
    const double* w = vert.weights.data() + vert.offset[y];
    acc = w[0] * tmp.row(vert.first[y]);
    for (int k = 1; k < vert.count[y]; ++k) acc += w[k] * tmp.row(vert.first[y] + k);
    out.row(y) = acc.cast<float>();
  }
  return ImageF(out_w, out_h, std::move(out));
}

template <typename Scalar>
ImageF resize_oracle(const Image<Scalar>& img, const ResizeSpec& spec) {
  spec.validate();
  FIDKIT_CHECK(img.width() <= kOracleMaxDim && img.height() <= kOracleMaxDim,
               "resize_oracle: input larger than " + std::to_string(kOracleMaxDim) +
                   "px per side; use the separable resize() instead");
  constexpr int C = ImageF::kChannels;
  const int in_w = img.width(), in_h = img.height();
  const int out_w = spec.out_width, out_h = spec.out_height;
  const double sx = static_cast<double>(in_w) / out_w;
  const double sy = static_cast<double>(in_h) / out_h;
  const FilterKind filter = spec.resizer.filter;
  ImageF out(out_w, out_h);

  if (filter == FilterKind::kNearest) {
    for (int y = 0; y < out_h; ++y)
      for (int x = 0; x < out_w; ++x)
        for (int c = 0; c < C; ++c)
          out(x, y, c) = static_cast<float>(
              img(nearest_index(x, sx, in_w), nearest_index(y, sy, in_h), c));
    return out;
  }

  const double fsx = spec.resizer.antialias ? std::max(1.0, sx) : 1.0;
  const double fsy = spec.resizer.antialias ? std::max(1.0, sy) : 1.0;
  for (int y = 0; y < out_h; ++y) {
    const double cy = (y + 0.5) * sy;
    for (int x = 0; x < out_w; ++x) {
      const double cx = (x + 0.5) * sx;
      double total = 0.0;
      double acc[C] = {0.0, 0.0, 0.0};
      for (int jy = 0; jy < in_h; ++jy) {
        const double ky = kernel_eval(filter, (jy + 0.5 - cy) / fsy);
        if (ky == 0.0) continue;
        for (int jx = 0; jx < in_w; ++jx) {
          const double w = kernel_eval(filter, (jx + 0.5 - cx) / fsx) * ky;
          if (w == 0.0) continue;
          total += w;
          for (int c = 0; c < C; ++c) acc[c] += w * static_cast<double>(img(jx, jy, c));
        }
      }
      if (total == 0.0) {
        for (int c = 0; c < C; ++c)
          out(x, y, c) = static_cast<float>(
              img(nearest_index(x, sx, in_w), nearest_index(y, sy, in_h), c));
      } else {
        for (int c = 0; c < C; ++c) out(x, y, c) = static_cast<float>(acc[c] / total);
      }
    }
  }
  return out;
}

template ImageF resize(const Image8&, const ResizeSpec&);
template ImageF resize(const ImageF&, const ResizeSpec&);
template ImageF resize_oracle(const Image8&, const ResizeSpec&);
template ImageF resize_oracle(const ImageF&, const ResizeSpec&);

}  // namespace fidkit
