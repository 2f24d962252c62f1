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

#ifndef FIDKIT_PIPELINE_H_
#define FIDKIT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fidkit/features.h"
#include "fidkit/image_source.h"
#include "fidkit/pixel.h"
#include "fidkit/report.h"
#include "fidkit/stats_cache.h"
#include "fidkit/testpatterns.h"

namespace fidkit {

struct RunOptions {
  int threads = 0;  // 0: one per hardware thread
  std::uint64_t seed = 0;
  std::ostream* log = nullptr;  // warnings; nullptr silences them
};

// Features of every usable image of `source` under each chain. An image
// that fails to load is skipped for all chains, warned about and counted.
struct FeatureRun {
  std::vector<FeatureMatrix> features;  // one per chain
  // Per chain, PSNR of its stored pixels against chain 0's; only filled when
  // requested, and chain 0's own entry is all-infinite.
  std::vector<BatchPsnr> psnr;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

FeatureRun run_chains(const ImageSource& source, std::span<const PreprocessChain> chains,
                      const FeatureExtractor& extractor, const RunOptions& opts,
                      bool psnr_vs_first = false);

// One side of a comparison: an image source ("synthetic:N[:size]" or a
// directory) preprocessed with `chain`, or a stats cache file, in which
// case `chain` is ignored and provenance comes from the cache's sidecar.
struct SideSpec {
  std::string input;
  PreprocessChain chain;
};

struct ResolvedSide {
  GaussianStats stats;
  std::optional<FeatureMatrix> features;
  SideProvenance provenance;
};

// True when `input` names a stats cache file rather than images.
bool is_stats_cache_input(const std::string& input);

// `extractor` may be null only when side.input is a stats cache.
ResolvedSide resolve_side(const SideSpec& side, const FeatureExtractor* extractor,
                          const RunOptions& opts, bool need_features);

// Sidecar written next to a cache: "<cache>.json".
std::filesystem::path provenance_sidecar(const std::filesystem::path& cache);

struct StatsResult {
  StatsCache cache;
  SideProvenance provenance;
};

StatsResult cmd_stats(const SideSpec& side, const FeatureExtractor& extractor,
                      const RunOptions& opts);

// Refuses (IncomparableError) when the two sides, or a cache and
// `extractor`, disagree on extractor id or checksum. `extractor` may be
// null when both sides are caches.
MetricReport cmd_fid(const SideSpec& reference, const SideSpec& evaluated,
                     const FeatureExtractor* extractor, const RunOptions& opts);

struct KidOptions {
  int subsets = 0;  // 0: full-set estimator
  int subset_size = 1000;
};

MetricReport cmd_kid(const SideSpec& reference, const SideSpec& evaluated,
                     const FeatureExtractor* extractor, const RunOptions& opts,
                     const KidOptions& kid = {});

// Each image is resized to target x target by the variant, quantized, then
// passed through an identity FID resize, so variants differ only in the
// stored pixels.
PreprocessChain stored_resize_chain(const Resizer& variant, int target);

struct Heatmap {
  std::vector<std::string> variants;
  Eigen::MatrixXd fid;  // fid(i, j) between variant i and variant j
};

Heatmap cmd_heatmap(const ImageSource& source, const std::vector<Resizer>& variants,
                    int target, const FeatureExtractor& extractor, const RunOptions& opts);
CsvTable heatmap_csv(const Heatmap& h);
// Cells shaded white (0) to dark red (max), 32 pixels each.
Image8 heatmap_image(const Heatmap& h);

// Reference: the bicubic-aa stored copy. Rows: variant, fid, kid, mean psnr.
CsvTable cmd_sweep_resizer(const ImageSource& source, const std::vector<Resizer>& variants,
                           int target, const FeatureExtractor& extractor,
                           const RunOptions& opts);

struct JpegSweepConfig {
  std::vector<int> qualities{100, 98, 95, 90, 75};
  Resizer resizer;  // data resize before compression
  int target = kInceptionInputSize;
};

// Reference: lossless stored copy. Rows: quality, fid, kid, mean psnr,
// finite pairs, infinite pairs.
CsvTable cmd_sweep_jpeg(const ImageSource& source, const JpegSweepConfig& config,
                        const FeatureExtractor& extractor, const RunOptions& opts);

struct RatioSweepConfig {
  std::vector<double> ratios{1.0, 1.5, 2.0, 3.0, 4.0};
  std::vector<Resizer> variants;  // empty: every standard variant
  int target = kInceptionInputSize;
};

// Two steps per image: resize by 1/ratio with the tested variant, quantize,
// then bicubic-aa to target. The reference uses bicubic-aa for both steps
// at the same ratio. Rows: variant, ratio, intermediate size, fid.
CsvTable cmd_sweep_ratio(const ImageSource& source, const RatioSweepConfig& config,
                         const FeatureExtractor& extractor, const RunOptions& opts);

// Arithmetic mean of per-pair PSNR over two sources paired by index;
// count mismatch throws.
BatchPsnr batch_psnr(const ImageSource& a, const ImageSource& b, const RunOptions& opts);

// Diagnose fixtures.
inline constexpr int kDiagnoseFactor = 8;
Pattern diagnose_circle();        // thin ring, 256x256
Pattern diagnose_checkerboard();  // period 2, 250x250
Pattern diagnose_zone_plate();    // 256x256, up to 0.5 cycles/pixel

inline constexpr double kRingGapPass = 0.05;
inline constexpr double kRingGapFail = 0.30;
inline constexpr double kEnergyPass = 1e-3;
inline constexpr double kEnergyFail = 1.0;

enum class Verdict { kPass, kWarn, kFail };
const char* verdict_symbol(Verdict v);
const char* verdict_name(Verdict v);

// kPass when the ring is intact and the checkerboard nearly flat; kFail
// when the ring breaks up or the checkerboard aliases visibly; kWarn in
// between.
Verdict classify(double ring_gap, double aliasing_energy);

struct DiagnoseRecord {
  std::string variant;
  double ring_gap = 0.0;
  double checker_energy = 0.0;
  double zone_plate_energy = 0.0;
  Verdict verdict = Verdict::kWarn;
};

// Downscales every fixture by kDiagnoseFactor with each variant. With
// out_dir, writes the source and downscaled PNGs there.
std::vector<DiagnoseRecord> cmd_diagnose(const std::vector<Resizer>& variants,
                                         const std::optional<std::filesystem::path>& out_dir);
// One JSON object per line.
std::string diagnose_json_lines(const std::vector<DiagnoseRecord>& records);

}  // namespace fidkit

#endif  // FIDKIT_PIPELINE_H_
