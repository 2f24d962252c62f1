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

#include "fidkit/pipeline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "fidkit/codec.h"
#include "fidkit/error.h"
#include "fidkit/parallel.h"

namespace fidkit {
namespace {

void warn(const RunOptions& opts, const std::string& msg) {
  if (opts.log) *opts.log << "warning: " << msg << '\n';
}

std::string hex(const Digest& d) { return to_hex(d); }

SideProvenance provenance_for(const std::string& source, const PreprocessChain& chain,
                              const FeatureExtractor& extractor, std::size_t used,
                              std::size_t skipped) {
  SideProvenance p;
  p.source = source;
  p.chain = chain_to_json(chain);
  p.extractor_id = extractor.id();
  p.extractor_checksum = hex(extractor.checksum());
  p.count = used;
  p.skipped = skipped;
  return p;
}

struct Slot {
  bool ok = false;
  std::string error;
  std::vector<Eigen::VectorXd> features;
  std::vector<double> psnr;
};

std::string size_label(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

}  // namespace

FeatureRun run_chains(const ImageSource& source, std::span<const PreprocessChain> chains,
                      const FeatureExtractor& extractor, const RunOptions& opts,
                      bool psnr_vs_first) {
  FIDKIT_CHECK(!chains.empty(), "no preprocessing chains given");
  for (const auto& c : chains) c.validate(&extractor);
  if (psnr_vs_first) {
    for (const auto& c : chains)
      FIDKIT_CHECK(c.quantize, "PSNR needs quantized stored pixels on every chain");
  }

  const std::size_t n = source.size();
  std::vector<Slot> slots(n);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    Slot& slot = slots[i];
    Image8 img(1, 1);
    try {
      img = source.load(i);
    } catch (const std::exception& e) {
      slot.error = e.what();
      return;
    }
    std::optional<Image8> first_stored;
    for (std::size_t k = 0; k < chains.size(); ++k) {
      const ImageF stored = storage_stage(img, chains[k]);
      if (psnr_vs_first) {
        Image8 q = quantize(stored);
        if (k == 0) {
          slot.psnr.push_back(std::numeric_limits<double>::infinity());
          first_stored = std::move(q);
        } else {
          slot.psnr.push_back(psnr(*first_stored, q));
        }
      }
      Eigen::VectorXd f = extractor.features(extractor_stage(stored, chains[k]));
      FIDKIT_CHECK(f.size() == extractor.dim() && f.allFinite(),
                   "extractor " + extractor.id() + " returned a malformed feature vector for " +
                       source.name(i));
      slot.features.push_back(std::move(f));
    }
    slot.ok = true;
  });

  FeatureRun run;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i].ok) {
      ++run.used;
    } else {
      ++run.skipped;
      warn(opts, "skipping unreadable image " + source.name(i) + ": " + slots[i].error);
    }
  }
  FIDKIT_CHECK(run.used > 0, "no usable images in " + source.id());

  const auto dim = static_cast<Eigen::Index>(extractor.dim());
  run.features.assign(chains.size(), FeatureMatrix(static_cast<Eigen::Index>(run.used), dim));
  std::vector<std::vector<double>> psnr_lists(psnr_vs_first ? chains.size() : 0);
  Eigen::Index row = 0;
  for (const Slot& slot : slots) {
    if (!slot.ok) continue;
    for (std::size_t k = 0; k < chains.size(); ++k) {
      run.features[k].row(row) = slot.features[k].transpose();
      if (psnr_vs_first) psnr_lists[k].push_back(slot.psnr[k]);
    }
    ++row;
  }
  for (const auto& list : psnr_lists) run.psnr.push_back(summarize_psnr(list));
  return run;
}

std::filesystem::path provenance_sidecar(const std::filesystem::path& cache) {
  std::filesystem::path p = cache;
  p += ".json";
  return p;
}

bool is_stats_cache_input(const std::string& input) {
  return std::filesystem::is_regular_file(input);
}

ResolvedSide resolve_side(const SideSpec& side, const FeatureExtractor* extractor,
                          const RunOptions& opts, bool need_features) {
  ResolvedSide out;
  if (is_stats_cache_input(side.input)) {
    FIDKIT_CHECK(looks_like_stats_cache(side.input),
                 side.input + " is neither a directory nor a stats cache");
    FIDKIT_CHECK(!need_features,
                 "KID needs per-image features, but " + side.input + " is a stats cache");
    StatsCache cache = read_stats_cache(side.input);
    if (extractor && (cache.extractor_id != extractor->id() ||
                      cache.extractor_checksum != extractor->checksum())) {
      throw IncomparableError("stats cache " + side.input + " was computed with extractor " +
                              cache.extractor_id + " (checksum " +
                              hex(cache.extractor_checksum) + ") but this run uses " +
                              extractor->id() + " (checksum " + hex(extractor->checksum()) +
                              "); scores from different feature extractors are not comparable");
    }
    out.stats = std::move(cache.stats);
    const auto sidecar = provenance_sidecar(side.input);
    if (std::filesystem::is_regular_file(sidecar)) {
      std::ifstream f(sidecar);
      try {
        out.provenance = SideProvenance::from_json(Json::parse(f));
      } catch (const nlohmann::json::exception& e) {
        throw Error("malformed provenance sidecar " + sidecar.string() + ": " + e.what());
      }
      FIDKIT_CHECK(out.provenance.extractor_id == cache.extractor_id &&
                       out.provenance.extractor_checksum == hex(cache.extractor_checksum),
                   "provenance sidecar " + sidecar.string() + " does not match its cache");
    } else {
      warn(opts, "no provenance sidecar for " + side.input + "; preprocessing unknown");
      out.provenance.extractor_id = cache.extractor_id;
      out.provenance.extractor_checksum = hex(cache.extractor_checksum);
      out.provenance.count = out.stats.count;
    }
    out.provenance.source = side.input;
    return out;
  }

  FIDKIT_CHECK(extractor != nullptr, "a feature extractor is needed to read " + side.input);
  const auto source = open_source(side.input, opts.seed);
  const PreprocessChain chains[] = {side.chain};
  FeatureRun run = run_chains(*source, chains, *extractor, opts);
  FIDKIT_CHECK(run.used >= 2, "need at least 2 usable images in " + side.input);
  out.stats = fit_gaussian(run.features[0]);
  out.provenance = provenance_for(source->id(), side.chain, *extractor, run.used, run.skipped);
  if (need_features) out.features = std::move(run.features[0]);
  return out;
}

namespace {

void require_same_extractor(const SideProvenance& a, const SideProvenance& b) {
  if (a.extractor_id != b.extractor_id || a.extractor_checksum != b.extractor_checksum) {
    throw IncomparableError("sides use different feature extractors: " + a.extractor_id +
                            " (checksum " + a.extractor_checksum + ") vs " + b.extractor_id +
                            " (checksum " + b.extractor_checksum + ")");
  }
}

}  // namespace

StatsResult cmd_stats(const SideSpec& side, const FeatureExtractor& extractor,
                      const RunOptions& opts) {
  FIDKIT_CHECK(!std::filesystem::is_regular_file(side.input),
               "stats expects an image directory or synthetic source, got a file: " + side.input);
  ResolvedSide r = resolve_side(side, &extractor, opts, false);
  StatsResult out;
  out.cache.extractor_id = extractor.id();
  out.cache.extractor_checksum = extractor.checksum();
  out.cache.stats = std::move(r.stats);
  out.provenance = std::move(r.provenance);
  return out;
}

MetricReport cmd_fid(const SideSpec& reference, const SideSpec& evaluated,
                     const FeatureExtractor* extractor, const RunOptions& opts) {
  const ResolvedSide a = resolve_side(reference, extractor, opts, false);
  const ResolvedSide b = resolve_side(evaluated, extractor, opts, false);
  require_same_extractor(a.provenance, b.provenance);
  const FrechetResult f = frechet(a.stats, b.stats);
  MetricReport r;
  r.metric = "fid";
  r.value = f.value;
  r.epsilon = f.epsilon;
  r.reference = a.provenance;
  r.evaluated = b.provenance;
  return r;
}

MetricReport cmd_kid(const SideSpec& reference, const SideSpec& evaluated,
                     const FeatureExtractor* extractor, const RunOptions& opts,
                     const KidOptions& kid) {
  const ResolvedSide a = resolve_side(reference, extractor, opts, true);
  const ResolvedSide b = resolve_side(evaluated, extractor, opts, true);
  require_same_extractor(a.provenance, b.provenance);
  MetricReport r;
  r.metric = "kid";
  if (kid.subsets > 0) {
    r.value = kid_subsets(*a.features, *b.features, kid.subsets, kid.subset_size, opts.seed);
    r.kid_mode = "subsets:" + std::to_string(kid.subsets) + "x" +
                 std::to_string(kid.subset_size) + "@seed=" + std::to_string(opts.seed);
  } else {
    r.value = kid_full(*a.features, *b.features);
    r.kid_mode = "full";
  }
  r.reference = a.provenance;
  r.evaluated = b.provenance;
  return r;
}

PreprocessChain stored_resize_chain(const Resizer& variant, int target) {
  PreprocessChain c;
  c.data_resize = ResizeSpec{variant, target, target};
  c.quantize = true;
  c.fid_resize = ResizeSpec{Resizer{}, target, target};
  return c;
}

Heatmap cmd_heatmap(const ImageSource& source, const std::vector<Resizer>& variants,
                    int target, const FeatureExtractor& extractor, const RunOptions& opts) {
  FIDKIT_CHECK(variants.size() >= 2, "heatmap needs at least 2 resizer variants");
  std::vector<PreprocessChain> chains;
  for (const auto& v : variants) chains.push_back(stored_resize_chain(v, target));
  FeatureRun run = run_chains(source, chains, extractor, opts);
  FIDKIT_CHECK(run.used >= 2, "heatmap needs at least 2 usable images");

  std::vector<GaussianStats> g;
  for (const auto& f : run.features) g.push_back(fit_gaussian(f));
  Heatmap h;
  const auto k = static_cast<Eigen::Index>(variants.size());
  h.fid.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    h.variants.push_back(variants[static_cast<std::size_t>(i)].id());
    for (Eigen::Index j = 0; j < k; ++j)
      h.fid(i, j) = frechet_distance(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
  }
  return h;
}

CsvTable heatmap_csv(const Heatmap& h) {
  std::vector<std::string> header{"variant"};
  header.insert(header.end(), h.variants.begin(), h.variants.end());
  CsvTable t(header);
  for (std::size_t i = 0; i < h.variants.size(); ++i) {
    std::vector<std::string> row{h.variants[i]};
    for (std::size_t j = 0; j < h.variants.size(); ++j)
      row.push_back(format_number(h.fid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    t.add_row(std::move(row));
  }
  return t;
}

Image8 heatmap_image(const Heatmap& h) {
  constexpr int kCell = 32;
  const int k = static_cast<int>(h.variants.size());
  const double max = std::max(h.fid.maxCoeff(), 1e-300);
  Image8 img(k * kCell, k * kCell);
  for (int y = 0; y < k * kCell; ++y) {
    for (int x = 0; x < k * kCell; ++x) {
      const double t = std::clamp(h.fid(y / kCell, x / kCell) / max, 0.0, 1.0);
      img(x, y, 0) = static_cast<std::uint8_t>(std::lround(255.0 - 127.0 * t));
      img(x, y, 1) = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - t)));
      img(x, y, 2) = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - t)));
    }
  }
  return img;
}

CsvTable cmd_sweep_resizer(const ImageSource& source, const std::vector<Resizer>& variants,
                           int target, const FeatureExtractor& extractor,
                           const RunOptions& opts) {
  FIDKIT_CHECK(!variants.empty(), "resizer sweep needs at least one variant");
  std::vector<PreprocessChain> chains{stored_resize_chain(Resizer{}, target)};
  for (const auto& v : variants) chains.push_back(stored_resize_chain(v, target));
  FeatureRun run = run_chains(source, chains, extractor, opts, true);
  FIDKIT_CHECK(run.used >= 2, "resizer sweep needs at least 2 usable images");

  const GaussianStats ref = fit_gaussian(run.features[0]);
  CsvTable t({"variant", "fid", "kid", "mean_psnr_db", "finite_pairs", "identical_pairs"});
  for (std::size_t k = 0; k < variants.size(); ++k) {
    const FeatureMatrix& f = run.features[k + 1];
    const BatchPsnr& p = run.psnr[k + 1];
    t.add_row({variants[k].id(), format_number(frechet_distance(ref, fit_gaussian(f))),
               format_number(kid_full(run.features[0], f)), format_number(p.mean_db),
               std::to_string(p.finite_pairs), std::to_string(p.infinite_pairs)});
  }
  return t;
}

CsvTable cmd_sweep_jpeg(const ImageSource& source, const JpegSweepConfig& config,
                        const FeatureExtractor& extractor, const RunOptions& opts) {
  FIDKIT_CHECK(!config.qualities.empty(), "jpeg sweep needs at least one quality");
  PreprocessChain lossless = stored_resize_chain(config.resizer, config.target);
  lossless.compression = CompressionSpec::Png();
  std::vector<PreprocessChain> chains{lossless};
  for (int q : config.qualities) {
    PreprocessChain c = lossless;
    c.compression = CompressionSpec::Jpeg(q);
    chains.push_back(c);
  }
  FeatureRun run = run_chains(source, chains, extractor, opts, true);
  FIDKIT_CHECK(run.used >= 2, "jpeg sweep needs at least 2 usable images");

  const GaussianStats ref = fit_gaussian(run.features[0]);
  CsvTable t({"quality", "fid", "kid", "mean_psnr_db", "finite_pairs", "identical_pairs"});
  for (std::size_t k = 0; k < config.qualities.size(); ++k) {
    const FeatureMatrix& f = run.features[k + 1];
    const BatchPsnr& p = run.psnr[k + 1];
    t.add_row({std::to_string(config.qualities[k]),
               format_number(frechet_distance(ref, fit_gaussian(f))),
               format_number(kid_full(run.features[0], f)), format_number(p.mean_db),
               std::to_string(p.finite_pairs), std::to_string(p.infinite_pairs)});
  }
  return t;
}

CsvTable cmd_sweep_ratio(const ImageSource& source, const RatioSweepConfig& config,
                         const FeatureExtractor& extractor, const RunOptions& opts) {
  FIDKIT_CHECK(!config.ratios.empty(), "ratio sweep needs at least one ratio");
  for (double r : config.ratios)
    FIDKIT_CHECK(std::isfinite(r) && r >= 1.0, "ratio sweep: ratios must be >= 1");
  FIDKIT_CHECK(source.size() > 0, "ratio sweep: empty source");
  const std::vector<Resizer>& variants =
      config.variants.empty() ? standard_resizers() : config.variants;

  // Intermediate sizes come from the first image; the sweep needs one size.
  const Image8 first = source.load(0);
  const int w = first.width(), h = first.height();
  struct Entry {
    std::string variant;
    double ratio;
    int mw, mh;
    std::size_t chain, reference;
  };
  std::vector<PreprocessChain> chains;
  auto chain_index = [&chains](const PreprocessChain& c) {
    auto it = std::find(chains.begin(), chains.end(), c);
    if (it != chains.end()) return static_cast<std::size_t>(it - chains.begin());
    chains.push_back(c);
    return chains.size() - 1;
  };
  std::vector<Entry> entries;
  for (double r : config.ratios) {
    const int mw = std::max(1, static_cast<int>(std::lround(w / r)));
    const int mh = std::max(1, static_cast<int>(std::lround(h / r)));
    if (mw < config.target || mh < config.target) {
      warn(opts, "ratio " + format_number(r) + " gives an intermediate " + size_label(mw, mh) +
                     " smaller than the " + std::to_string(config.target) +
                     " target; the second step upsamples");
    }
    PreprocessChain ref;
    ref.data_resize = ResizeSpec{Resizer{}, mw, mh};
    ref.fid_resize = ResizeSpec{Resizer{}, config.target, config.target};
    const std::size_t ref_index = chain_index(ref);
    for (const auto& v : variants) {
      PreprocessChain c = ref;
      c.data_resize->resizer = v;
      entries.push_back({v.id(), r, mw, mh, chain_index(c), ref_index});
    }
  }

  struct SizeCheck final : ImageSource {
    const ImageSource& inner;
    int w, h;
    SizeCheck(const ImageSource& s, int w_, int h_) : inner(s), w(w_), h(h_) {}
    std::size_t size() const override { return inner.size(); }
    std::string name(std::size_t i) const override { return inner.name(i); }
    std::string id() const override { return inner.id(); }
    Image8 load(std::size_t i) const override {
      Image8 img = inner.load(i);
      FIDKIT_CHECK(img.width() == w && img.height() == h,
                   "ratio sweep needs equally sized images; " + inner.name(i) + " is " +
                       size_label(img.width(), img.height()) + ", expected " + size_label(w, h));
      return img;
    }
  } checked(source, w, h);

  FeatureRun run = run_chains(checked, chains, extractor, opts);
  FIDKIT_CHECK(run.used >= 2, "ratio sweep needs at least 2 usable images");
  std::vector<GaussianStats> g;
  for (const auto& f : run.features) g.push_back(fit_gaussian(f));

  CsvTable t({"variant", "ratio", "intermediate", "fid"});
  for (const Entry& e : entries) {
    t.add_row({e.variant, format_number(e.ratio), size_label(e.mw, e.mh),
               format_number(frechet_distance(g[e.reference], g[e.chain]))});
  }
  return t;
}

BatchPsnr batch_psnr(const ImageSource& a, const ImageSource& b, const RunOptions& opts) {
  FIDKIT_CHECK(a.size() == b.size(), "psnr: image counts differ (" + std::to_string(a.size()) +
                                         " vs " + std::to_string(b.size()) + ")");
  FIDKIT_CHECK(a.size() > 0, "psnr: no images");
  std::vector<double> values(a.size());
  parallel_for(a.size(), opts.threads, [&](std::size_t i) {
    try {
      values[i] = psnr(a.load(i), b.load(i));
    } catch (const Error& e) {
      throw Error("psnr: pair " + a.name(i) + " / " + b.name(i) + ": " + e.what());
    }
  });
  return summarize_psnr(values);
}

Pattern diagnose_circle() { return Pattern{CircleOutline{106.0, 0.5}, 256, 256}; }
Pattern diagnose_checkerboard() { return Pattern{Checkerboard{2}, 250, 250}; }
Pattern diagnose_zone_plate() { return Pattern{ZonePlate{0.5}, 256, 256}; }

const char* verdict_symbol(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "✓";
    case Verdict::kWarn: return "⚠";
    case Verdict::kFail: return "✗";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kWarn: return "warn";
    case Verdict::kFail: return "fail";
  }
  return "?";
}

Verdict classify(double ring_gap, double aliasing_energy) {
  if (ring_gap > kRingGapFail || aliasing_energy > kEnergyFail) return Verdict::kFail;
  if (ring_gap < kRingGapPass && aliasing_energy < kEnergyPass) return Verdict::kPass;
  return Verdict::kWarn;
}

std::vector<DiagnoseRecord> cmd_diagnose(const std::vector<Resizer>& variants,
                                         const std::optional<std::filesystem::path>& out_dir) {
  FIDKIT_CHECK(!variants.empty(), "diagnose needs at least one resizer variant");
  const Pattern circle_p = diagnose_circle();
  const Pattern checker_p = diagnose_checkerboard();
  const Pattern zone_p = diagnose_zone_plate();
  const Image8 circle = generate(circle_p);
  const Image8 checker = generate(checker_p);
  const Image8 zone = generate(zone_p);
  const double radius = std::get<CircleOutline>(circle_p.kind).radius / kDiagnoseFactor;

  auto down = [](const Image8& img, const Resizer& r) {
    const int w = std::max(1, static_cast<int>(std::lround(img.width() / double(kDiagnoseFactor))));
    const int h = std::max(1, static_cast<int>(std::lround(img.height() / double(kDiagnoseFactor))));
    return resize(img, ResizeSpec{r, w, h});
  };

  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_png(*out_dir / "source-circle.png", circle);
    write_png(*out_dir / "source-checkerboard.png", checker);
    write_png(*out_dir / "source-zoneplate.png", zone);
  }

  std::vector<DiagnoseRecord> records;
  for (const auto& v : variants) {
    const ImageF c = down(circle, v), k = down(checker, v), z = down(zone, v);
    DiagnoseRecord rec;
    rec.variant = v.id();
    rec.ring_gap = ring_gap_fraction(c, radius);
    rec.checker_energy = aliasing_energy(k);
    rec.zone_plate_energy = aliasing_energy(z);
    rec.verdict = classify(rec.ring_gap, rec.checker_energy);
    if (out_dir) {
      write_png(*out_dir / (rec.variant + "-circle.png"), quantize(c));
      write_png(*out_dir / (rec.variant + "-checkerboard.png"), quantize(k));
      write_png(*out_dir / (rec.variant + "-zoneplate.png"), quantize(z));
    }
    records.push_back(rec);
  }
  return records;
}

std::string diagnose_json_lines(const std::vector<DiagnoseRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    Json j;
    j["variant"] = r.variant;
    j["ring_gap_fraction"] = r.ring_gap;
    j["checkerboard_aliasing_energy"] = r.checker_energy;
    j["zoneplate_aliasing_energy"] = r.zone_plate_energy;
    j["verdict"] = verdict_symbol(r.verdict);
    j["verdict_name"] = verdict_name(r.verdict);
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace fidkit
