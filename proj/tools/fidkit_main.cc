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

// fidkit command line: FID/KID with explicit preprocessing provenance, plus
// the resizer, JPEG and downscaling-ratio experiments.
//
// Exit codes: 0 success, 2 incomparable provenance, 1 any other error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fidkit/codec.h"
#include "fidkit/corpus.h"
#include "fidkit/error.h"
#include "fidkit/features.h"
#include "fidkit/parallel.h"
#include "fidkit/pipeline.h"
#include "fidkit/report.h"

namespace {

using namespace fidkit;

constexpr int kExitError = 1;
constexpr int kExitIncomparable = 2;

struct CommonFlags {
  std::string extractor = "toy";
  std::string model;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  std::string format;

  RunOptions run_options() const { return RunOptions{threads, seed, &std::cerr}; }

  std::shared_ptr<const FeatureExtractor> make() const {
    std::optional<std::filesystem::path> path;
    if (!model.empty()) path = model;
    return make_extractor(extractor, path);
  }
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_extractor) {
  if (with_extractor) {
    cmd->add_option("--extractor", f.extractor, "Feature extractor")
        ->check(CLI::IsMember({"toy", "inception"}))
        ->capture_default_str();
    cmd->add_option("--model", f.model,
                    std::string("Inception graph file (default: $") + kInceptionModelEnv + ")");
    cmd->add_option("--threads", f.threads, "Worker threads (0: all cores)")
        ->capture_default_str();
  }
  cmd->add_option("--seed", f.seed, "Seed for synthetic sources and KID subsets")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
}

struct ChainFlags {
  std::string resizer = "bicubic-aa";
  std::string data_resizer;
  bool no_quantize = false;
  int jpeg_quality = 0;
  int size = kInceptionInputSize;
  int data_size = 0;

  PreprocessChain chain() const {
    PreprocessChain c;
    c.fid_resize = ResizeSpec{Resizer::Parse(resizer), size, size};
    if (!data_resizer.empty()) {
      FIDKIT_CHECK(data_size > 0, "--data-resizer needs --data-size");
      c.data_resize = ResizeSpec{Resizer::Parse(data_resizer), data_size, data_size};
    }
    c.quantize = !no_quantize;
    if (jpeg_quality) c.compression = CompressionSpec::Jpeg(jpeg_quality);
    return c;
  }
};

void add_chain(CLI::App* cmd, ChainFlags& f, const std::string& prefix = "") {
  cmd->add_option("--" + prefix + "resizer", f.resizer, "FID resizer id")->capture_default_str();
  cmd->add_option("--" + prefix + "size", f.size, "FID input side in pixels")
      ->capture_default_str();
  cmd->add_option("--" + prefix + "data-resizer", f.data_resizer,
                  "Resize images with this resizer before storage");
  cmd->add_option("--" + prefix + "data-size", f.data_size, "Side for --data-resizer");
  cmd->add_flag("--" + prefix + "no-quantize", f.no_quantize,
                "Keep float pixels between the two resizes");
  cmd->add_option("--" + prefix + "jpeg-quality", f.jpeg_quality,
                  "Store images as JPEG at this quality before the FID resize")
      ->check(CLI::Range(1, 100));
}

void emit(const CommonFlags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
  } else {
    write_text(f.out, text);
  }
}

std::string format_table(const CsvTable& t, const std::string& format) {
  if (format == "json") return table_to_json(t).dump(2) + "\n";
  return t.str();
}

std::vector<Resizer> parse_variants(const std::vector<std::string>& ids) {
  if (ids.empty()) return standard_resizers();
  std::vector<Resizer> out;
  for (const auto& id : ids) out.push_back(Resizer::Parse(id));
  return out;
}

std::string report_text(const MetricReport& r, const std::string& format) {
  if (format == "csv") {
    CsvTable t({"metric", "value", "reference", "evaluated"});
    t.add_row({r.metric, format_number(r.value), r.reference.source, r.evaluated.source});
    return t.str();
  }
  return r.to_json().dump(2) + "\n";
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  FIDKIT_CHECK(f.good(), "cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed JSON in " + path + ": " + e.what());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"fidkit: FID/KID evaluation with explicit, antialiased preprocessing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fidkit 1.0.0");

  // stats
  CommonFlags stats_f;
  ChainFlags stats_c;
  std::string stats_input;
  auto* stats = app.add_subcommand("stats", "Compute a Gaussian stats cache for an image set");
  stats->add_option("input", stats_input, "Image directory or synthetic:<count>[:<size>]")
      ->required();
  add_common(stats, stats_f, true);
  add_chain(stats, stats_c);
  stats->callback([&] {
    FIDKIT_CHECK(!stats_f.out.empty(), "stats needs --out <cache file>");
    const auto ex = stats_f.make();
    const StatsResult r = cmd_stats({stats_input, stats_c.chain()}, *ex, stats_f.run_options());
    write_stats_cache(stats_f.out, r.cache);
    write_text(provenance_sidecar(stats_f.out), r.provenance.to_json().dump(2) + "\n");
    std::cerr << "wrote " << stats_f.out << " (N=" << r.cache.stats.count
              << ", D=" << r.cache.stats.dim() << ", skipped " << r.provenance.skipped << ")\n";
  });

  // fid / kid
  CommonFlags metric_f;
  ChainFlags ref_c, eval_c;
  std::string ref_input, eval_input;
  int subsets = 0, subset_size = 1000;
  auto setup_metric = [&](CLI::App* cmd) {
    cmd->add_option("reference", ref_input, "Directory, synthetic source or stats cache")
        ->required();
    cmd->add_option("evaluated", eval_input, "Directory, synthetic source or stats cache")
        ->required();
    add_common(cmd, metric_f, true);
    add_chain(cmd, ref_c);
    add_chain(cmd, eval_c, "eval-");
    cmd->add_option("--format", metric_f.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  // --eval-* options default to the shared ones unless given.
  auto eval_chain = [&](CLI::App* cmd) {
    ChainFlags e = ref_c;
    if (cmd->count("--eval-resizer")) e.resizer = eval_c.resizer;
    if (cmd->count("--eval-size")) e.size = eval_c.size;
    if (cmd->count("--eval-data-resizer")) e.data_resizer = eval_c.data_resizer;
    if (cmd->count("--eval-data-size")) e.data_size = eval_c.data_size;
    if (cmd->count("--eval-no-quantize")) e.no_quantize = eval_c.no_quantize;
    if (cmd->count("--eval-jpeg-quality")) e.jpeg_quality = eval_c.jpeg_quality;
    return e.chain();
  };
  auto metric_extractor = [&]() -> std::shared_ptr<const FeatureExtractor> {
    if (is_stats_cache_input(ref_input) && is_stats_cache_input(eval_input) &&
        metric_f.model.empty()) {
      return nullptr;
    }
    return metric_f.make();
  };

  auto* fid = app.add_subcommand("fid", "Frechet distance between two image sets or caches");
  setup_metric(fid);
  fid->callback([&] {
    const auto ex = metric_extractor();
    const MetricReport r = cmd_fid({ref_input, ref_c.chain()}, {eval_input, eval_chain(fid)},
                                   ex.get(), metric_f.run_options());
    emit(metric_f, report_text(r, metric_f.format));
  });

  auto* kid = app.add_subcommand("kid", "Kernel (polynomial MMD) distance between two image sets");
  setup_metric(kid);
  kid->add_option("--subsets", subsets, "Average over this many random subsets (0: full set)")
      ->capture_default_str();
  kid->add_option("--subset-size", subset_size, "Rows per subset")->capture_default_str();
  kid->callback([&] {
    const auto ex = metric_f.make();
    const MetricReport r =
        cmd_kid({ref_input, ref_c.chain()}, {eval_input, eval_chain(kid)}, ex.get(),
                metric_f.run_options(), KidOptions{subsets, subset_size});
    emit(metric_f, report_text(r, metric_f.format));
  });

  // heatmap
  CommonFlags heat_f;
  std::string heat_input, heat_png;
  std::vector<std::string> heat_variants;
  int heat_size = kInceptionInputSize;
  auto* heat = app.add_subcommand("heatmap", "Pairwise FID between resizer variants");
  heat->add_option("input", heat_input, "Image directory or synthetic source")->required();
  heat->add_option("--variants", heat_variants, "Resizer ids (default: all seven)")
      ->delimiter(',');
  heat->add_option("--size", heat_size, "Target side")->capture_default_str();
  heat->add_option("--png", heat_png, "Also render the matrix as a PNG");
  add_common(heat, heat_f, true);
  heat->callback([&] {
    const auto ex = heat_f.make();
    const auto source = open_source(heat_input, heat_f.seed);
    const Heatmap h = cmd_heatmap(*source, parse_variants(heat_variants), heat_size, *ex,
                                  heat_f.run_options());
    emit(heat_f, heatmap_csv(h).str());
    if (!heat_png.empty()) write_png(heat_png, heatmap_image(h));
  });

  // sweeps
  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps");
  sweep->require_subcommand(1);

  CommonFlags jpeg_f;
  std::string jpeg_input, jpeg_resizer = "bicubic-aa";
  std::vector<int> qualities{100, 98, 95, 90, 75};
  int jpeg_size = kInceptionInputSize;
  auto* jpeg = sweep->add_subcommand("jpeg", "FID/KID/PSNR of JPEG copies against lossless");
  jpeg->add_option("input", jpeg_input, "Image directory or synthetic source")->required();
  jpeg->add_option("--qualities", qualities, "JPEG qualities")
      ->delimiter(',')
      ->check(CLI::Range(1, 100))
      ->capture_default_str();
  jpeg->add_option("--resizer", jpeg_resizer, "Resize applied before storage")
      ->capture_default_str();
  jpeg->add_option("--size", jpeg_size, "Stored and FID side")->capture_default_str();
  jpeg->add_option("--format", jpeg_f.format)->check(CLI::IsMember({"json", "csv"}));
  add_common(jpeg, jpeg_f, true);
  jpeg->callback([&] {
    const auto ex = jpeg_f.make();
    const auto source = open_source(jpeg_input, jpeg_f.seed);
    const CsvTable t = cmd_sweep_jpeg(
        *source, JpegSweepConfig{qualities, Resizer::Parse(jpeg_resizer), jpeg_size}, *ex,
        jpeg_f.run_options());
    emit(jpeg_f, format_table(t, jpeg_f.format));
  });

  CommonFlags ratio_f;
  std::string ratio_input;
  std::vector<double> ratios{1.0, 1.5, 2.0, 3.0, 4.0};
  std::vector<std::string> ratio_variants;
  int ratio_size = kInceptionInputSize;
  auto* ratio = sweep->add_subcommand("ratio", "FID of two-step resizes against bicubic-aa");
  ratio->add_option("input", ratio_input, "Image directory or synthetic source")->required();
  ratio->add_option("--ratios", ratios, "Downscaling ratios of the first step")
      ->delimiter(',')
      ->capture_default_str();
  ratio->add_option("--variants", ratio_variants, "Resizer ids (default: all seven)")
      ->delimiter(',');
  ratio->add_option("--size", ratio_size, "Final side")->capture_default_str();
  ratio->add_option("--format", ratio_f.format)->check(CLI::IsMember({"json", "csv"}));
  add_common(ratio, ratio_f, true);
  ratio->callback([&] {
    const auto ex = ratio_f.make();
    const auto source = open_source(ratio_input, ratio_f.seed);
    RatioSweepConfig cfg{ratios, {}, ratio_size};
    if (!ratio_variants.empty()) cfg.variants = parse_variants(ratio_variants);
    emit(ratio_f, format_table(cmd_sweep_ratio(*source, cfg, *ex, ratio_f.run_options()),
                               ratio_f.format));
  });

  CommonFlags rs_f;
  std::string rs_input;
  std::vector<std::string> rs_variants;
  int rs_size = kInceptionInputSize;
  auto* rs = sweep->add_subcommand("resizer", "FID/KID/PSNR of each resizer against bicubic-aa");
  rs->add_option("input", rs_input, "Image directory or synthetic source")->required();
  rs->add_option("--variants", rs_variants, "Resizer ids (default: all seven)")->delimiter(',');
  rs->add_option("--size", rs_size, "Target side")->capture_default_str();
  rs->add_option("--format", rs_f.format)->check(CLI::IsMember({"json", "csv"}));
  add_common(rs, rs_f, true);
  rs->callback([&] {
    const auto ex = rs_f.make();
    const auto source = open_source(rs_input, rs_f.seed);
    emit(rs_f, format_table(cmd_sweep_resizer(*source, parse_variants(rs_variants), rs_size, *ex,
                                              rs_f.run_options()),
                            rs_f.format));
  });

  // diagnose
  std::string diag_out;
  std::vector<std::string> diag_variants;
  auto* diag = app.add_subcommand("diagnose", "Downscale test patterns with every resizer");
  diag->add_option("--out", diag_out, "Directory for pattern PNGs and diagnose.jsonl");
  diag->add_option("--variants", diag_variants, "Resizer ids (default: all seven)")
      ->delimiter(',');
  diag->callback([&] {
    std::optional<std::filesystem::path> dir;
    if (!diag_out.empty()) dir = diag_out;
    const auto records = cmd_diagnose(parse_variants(diag_variants), dir);
    const std::string lines = diagnose_json_lines(records);
    if (dir) write_text(*dir / "diagnose.jsonl", lines);
    std::cout << lines;
    for (const auto& r : records) {
      std::printf("%s %-14s ring_gap=%.3f checker_energy=%.4g\n", verdict_symbol(r.verdict),
                  r.variant.c_str(), r.ring_gap, r.checker_energy);
    }
  });

  // psnr
  CommonFlags psnr_f;
  std::string psnr_a, psnr_b;
  auto* ps = app.add_subcommand("psnr", "Mean PSNR over image pairs matched by sorted filename");
  ps->add_option("a", psnr_a, "First image directory")->required();
  ps->add_option("b", psnr_b, "Second image directory")->required();
  ps->add_option("--format", psnr_f.format)->check(CLI::IsMember({"json", "csv"}));
  ps->add_option("--threads", psnr_f.threads, "Worker threads (0: all cores)");
  add_common(ps, psnr_f, false);
  ps->callback([&] {
    const auto a = open_source(psnr_a, psnr_f.seed);
    const auto b = open_source(psnr_b, psnr_f.seed);
    const BatchPsnr p = batch_psnr(*a, *b, psnr_f.run_options());
    CsvTable t({"mean_psnr_db", "finite_pairs", "identical_pairs"});
    t.add_row({format_number(p.mean_db), std::to_string(p.finite_pairs),
               std::to_string(p.infinite_pairs)});
    emit(psnr_f, format_table(t, psnr_f.format));
  });

  // compare
  std::string cmp_a, cmp_b;
  auto* cmp = app.add_subcommand("compare", "Diff two metric reports; exit 2 if incomparable");
  cmp->add_option("a", cmp_a, "Report JSON")->required();
  cmp->add_option("b", cmp_b, "Report JSON")->required();
  cmp->callback([&] {
    const MetricReport a = MetricReport::from_json(read_json_file(cmp_a));
    const MetricReport b = MetricReport::from_json(read_json_file(cmp_b));
    const auto diffs = provenance_differences(a, b);
    if (!diffs.empty()) {
      std::string msg = "reports are not comparable:";
      for (const auto& d : diffs) msg += "\n  " + d;
      throw IncomparableError(msg);
    }
    std::printf("comparable %s: %s vs %s (difference %s)\n", a.metric.c_str(),
                format_number(a.value).c_str(), format_number(b.value).c_str(),
                format_number(b.value - a.value).c_str());
    if (a.reference.count != b.reference.count || a.evaluated.count != b.evaluated.count)
      std::printf("note: sample counts differ\n");
  });

  // synth
  std::string synth_dir;
  std::size_t synth_count = SyntheticCorpus::kDefaultCount;
  int synth_size = SyntheticCorpus::kDefaultSize;
  std::uint64_t synth_seed = 0;
  int synth_threads = 0;
  auto* synth = app.add_subcommand("synth", "Write the synthetic corpus as PNG files");
  synth->add_option("dir", synth_dir, "Output directory")->required();
  synth->add_option("--count", synth_count)->capture_default_str();
  synth->add_option("--size", synth_size)->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--threads", synth_threads);
  synth->callback([&] {
    const SyntheticCorpus corpus(synth_count, synth_seed, synth_size);
    std::filesystem::create_directories(synth_dir);
    parallel_for(corpus.size(), synth_threads, [&](std::size_t i) {
      write_png(std::filesystem::path(synth_dir) / corpus.name(i), corpus.load(i));
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  } catch (const IncomparableError& e) {
    std::cerr << "incomparable: " << e.what() << '\n';
    return kExitIncomparable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
