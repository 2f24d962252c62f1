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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "fidkit/codec.h"
#include "fidkit/corpus.h"
#include "test_util.h"

namespace fidkit {
namespace {

const FeatureExtractor& toy() { return toy_extractor_spec(); }

PreprocessChain small_chain(int side = 32) {
  PreprocessChain c;
  c.fid_resize = {Resizer{}, side, side};
  return c;
}

RunOptions quiet(int threads = 1) { return RunOptions{threads, 0, nullptr}; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

TEST(RunChainsTest, IndependentOfThreadCount) {
  const SyntheticCorpus corpus(9, 1, 64);
  const std::vector<PreprocessChain> chains{
      stored_resize_chain(Resizer::Parse("bicubic-aa"), 24),
      stored_resize_chain(Resizer::Parse("nearest"), 24)};
  const FeatureRun one = run_chains(corpus, chains, toy(), quiet(1), true);
  for (int threads : {2, 3, 8}) {
    const FeatureRun many = run_chains(corpus, chains, toy(), quiet(threads), true);
    ASSERT_EQ(many.features.size(), 2u);
    EXPECT_EQ(many.features[0], one.features[0]);
    EXPECT_EQ(many.features[1], one.features[1]);
    EXPECT_EQ(many.psnr[1].mean_db, one.psnr[1].mean_db);
  }
  EXPECT_EQ(one.used, 9u);
  EXPECT_EQ(one.psnr[0].infinite_pairs, 9u);
  EXPECT_TRUE(std::isfinite(one.psnr[1].mean_db));
}

TEST(RunChainsTest, SkipsUnreadableImages) {
  testing::TempDir dir("skip");
  write_png(dir / "a.png", Image8::Constant(16, 16, 10));
  write_png(dir / "c.png", Image8::Constant(16, 16, 30));
  std::ofstream(dir / "b.png") << "not a png";
  const DirectorySource src(dir.path());
  std::ostringstream log;
  const PreprocessChain chains[] = {small_chain(16)};
  const FeatureRun run = run_chains(src, chains, toy(), RunOptions{2, 0, &log});
  EXPECT_EQ(run.used, 2u);
  EXPECT_EQ(run.skipped, 1u);
  EXPECT_EQ(run.features[0].rows(), 2);
  EXPECT_NE(log.str().find("b.png"), std::string::npos) << log.str();

  testing::TempDir bad("allbad");
  std::ofstream(bad / "x.png") << "junk";
  const DirectorySource none(bad.path());
  EXPECT_THROW(run_chains(none, chains, toy(), quiet()), Error);
}

TEST(StatsCommandTest, IdenticalImagesAndDeterministicBytes) {
  testing::TempDir dir("twins");
  write_png(dir / "a.png", Image8::Constant(20, 20, 99));
  write_png(dir / "b.png", Image8::Constant(20, 20, 99));
  const StatsResult r = cmd_stats({dir.path().string(), small_chain()}, toy(), quiet());
  EXPECT_TRUE(r.cache.stats.cov.isZero(0.0));
  EXPECT_EQ(r.cache.stats.count, 2u);
  EXPECT_EQ(r.cache.extractor_id, "toy-v1");

  const SideSpec side{"synthetic:10:48", small_chain()};
  const auto a = encode_stats_cache(cmd_stats(side, toy(), quiet(1)).cache);
  const auto b = encode_stats_cache(cmd_stats(side, toy(), quiet(4)).cache);
  EXPECT_EQ(a, b);
}

// Default chain on the full synthetic corpus. Pinned on x86-64 with glibc;
// other libm builds may round tanh/cos differently.
TEST(StatsCommandTest, GoldenCorpusCache) {
  const StatsResult r = cmd_stats({"synthetic:500", PreprocessChain{}}, toy(), quiet(0));
  EXPECT_EQ(to_hex(sha256(encode_stats_cache(r.cache))),
            "b53441765203fe7a66dd1f416b0efbdafe63ed7ea13304789017084318303bce");
}

TEST(FidCommandTest, SelfIsZeroAndReportCarriesProvenance) {
  const SideSpec side{"synthetic:10:48", small_chain()};
  const MetricReport r = cmd_fid(side, side, &toy(), quiet());
  EXPECT_NEAR(r.value, 0.0, 1e-8);
  EXPECT_EQ(r.metric, "fid");
  EXPECT_EQ(r.reference.extractor_id, "toy-v1");
  ASSERT_TRUE(r.reference.chain.has_value());
  EXPECT_EQ((*r.reference.chain)["id"], side.chain.id());
  EXPECT_EQ(r.reference.count, 10u);
  EXPECT_EQ(r.ddof, 1);

  SideSpec other = side;
  other.chain.data_resize = ResizeSpec{Resizer::Parse("nearest"), 24, 24};
  EXPECT_GT(cmd_fid(side, other, &toy(), quiet()).value, 0.0);
}

TEST(FidCommandTest, CachesAndExtractorChecks) {
  testing::TempDir dir("caches");
  const SideSpec side{"synthetic:8:48", small_chain()};
  const StatsResult s = cmd_stats(side, toy(), quiet());
  write_stats_cache(dir / "a.cfid", s.cache);
  write_text(provenance_sidecar(dir / "a.cfid"), s.provenance.to_json().dump());

  // Cache vs images agrees with images vs images.
  const MetricReport direct = cmd_fid(side, side, &toy(), quiet());
  const MetricReport cached =
      cmd_fid({(dir / "a.cfid").string(), {}}, side, &toy(), quiet());
  EXPECT_EQ(cached.value, direct.value);
  ASSERT_TRUE(cached.reference.chain.has_value());
  EXPECT_TRUE(provenance_differences(direct, cached).empty());

  // Cache without sidecar: preprocessing unknown, flagged by compare.
  write_stats_cache(dir / "bare.cfid", s.cache);
  std::ostringstream log;
  const MetricReport bare = cmd_fid({(dir / "bare.cfid").string(), {}}, side, &toy(),
                                    RunOptions{1, 0, &log});
  EXPECT_FALSE(bare.reference.chain.has_value());
  EXPECT_FALSE(provenance_differences(direct, bare).empty());

  // Same numbers under another extractor identity.
  StatsCache forged = s.cache;
  forged.extractor_checksum[0] ^= 1;
  write_stats_cache(dir / "forged.cfid", forged);
  EXPECT_THROW(cmd_fid({(dir / "forged.cfid").string(), {}}, side, &toy(), quiet()),
               IncomparableError);
  EXPECT_THROW(cmd_fid({(dir / "forged.cfid").string(), {}}, {(dir / "a.cfid").string(), {}},
                       nullptr, quiet()),
               IncomparableError);
  EXPECT_NO_THROW(cmd_fid({(dir / "a.cfid").string(), {}}, {(dir / "bare.cfid").string(), {}},
                          nullptr, quiet()));
}

TEST(KidCommandTest, ModesAreStamped) {
  const SideSpec a{"synthetic:12:48", small_chain()};
  SideSpec b = a;
  b.chain.compression = CompressionSpec::Jpeg(50);
  const MetricReport full = cmd_kid(a, b, &toy(), quiet());
  EXPECT_EQ(full.kid_mode, "full");
  EXPECT_TRUE(std::isfinite(full.value));
  const MetricReport sub = cmd_kid(a, b, &toy(), RunOptions{1, 5, nullptr}, KidOptions{4, 6});
  EXPECT_EQ(sub.kid_mode, "subsets:4x6@seed=5");
  EXPECT_EQ(sub.value, cmd_kid(a, b, &toy(), RunOptions{3, 5, nullptr}, KidOptions{4, 6}).value);
}

TEST(HeatmapTest, SymmetricZeroDiagonalMatchesSweep) {
  const SyntheticCorpus corpus(12, 2, 64);
  const Heatmap h = cmd_heatmap(corpus, standard_resizers(), 24, toy(), quiet());
  ASSERT_EQ(h.fid.rows(), 7);
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(h.fid(i, i), 0.0, 1e-8);
    for (int j = 0; j < 7; ++j) EXPECT_EQ(h.fid(i, j), h.fid(j, i));
  }
  const CsvTable sweep = cmd_sweep_resizer(corpus, standard_resizers(), 24, toy(), quiet());
  ASSERT_EQ(sweep.rows().size(), 7u);
  for (int j = 0; j < 7; ++j) {
    EXPECT_EQ(sweep.rows()[j][0], standard_resizers()[j].id());
    EXPECT_EQ(sweep.rows()[j][1], format_number(h.fid(0, j)));
  }
  const Image8 png = heatmap_image(h);
  EXPECT_EQ(png.width(), 7 * 32);
  EXPECT_EQ(heatmap_csv(h).rows().size(), 7u);
  EXPECT_THROW(cmd_heatmap(corpus, {Resizer{}}, 24, toy(), quiet()), Error);
}

TEST(SweepTest, JpegColumnsAndOrdering) {
  const SyntheticCorpus corpus(10, 3, 64);
  JpegSweepConfig cfg;
  cfg.qualities = {100, 50, 10};
  cfg.target = 32;
  const CsvTable t = cmd_sweep_jpeg(corpus, cfg, toy(), quiet());
  EXPECT_EQ(t.header(), (std::vector<std::string>{"quality", "fid", "kid", "mean_psnr_db",
                                                  "finite_pairs", "identical_pairs"}));
  ASSERT_EQ(t.rows().size(), 3u);
  const double f100 = std::stod(t.rows()[0][1]), f10 = std::stod(t.rows()[2][1]);
  EXPECT_LT(f100, f10);
  EXPECT_GT(std::stod(t.rows()[0][3]), std::stod(t.rows()[2][3]));
}

TEST(SweepTest, RatioOneIsIdentity) {
  const SyntheticCorpus corpus(10, 4, 64);
  RatioSweepConfig cfg;
  cfg.ratios = {1.0, 2.0};
  cfg.target = 16;
  const CsvTable t = cmd_sweep_ratio(corpus, cfg, toy(), quiet());
  ASSERT_EQ(t.rows().size(), 14u);
  for (const auto& row : t.rows()) {
    if (row[1] == "1") EXPECT_EQ(std::stod(row[3]), 0.0) << row[0];
    if (row[0] == "bicubic-aa") EXPECT_EQ(std::stod(row[3]), 0.0) << row[1];
  }
  std::ostringstream log;
  cfg.ratios = {8.0};
  cfg.variants = {Resizer::Parse("nearest")};
  cmd_sweep_ratio(corpus, cfg, toy(), RunOptions{1, 0, &log});
  EXPECT_NE(log.str().find("smaller than the 16"), std::string::npos) << log.str();
}

TEST(BatchPsnrTest, PairsByIndex) {
  const SyntheticCorpus corpus(4, 5, 64);
  std::vector<Image8> copies, q100;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    copies.push_back(corpus.load(i));
    q100.push_back(codec_roundtrip(copies.back(), CompressionSpec::Jpeg(100)));
  }
  const BatchPsnr same = batch_psnr(corpus, VectorSource(copies), quiet());
  EXPECT_EQ(same.mean_db, std::numeric_limits<double>::infinity());
  EXPECT_EQ(same.infinite_pairs, 4u);
  const BatchPsnr jpeg = batch_psnr(corpus, VectorSource(q100), quiet(2));
  EXPECT_GE(jpeg.mean_db, 45.0);
  EXPECT_EQ(jpeg.finite_pairs, 4u);
  copies.pop_back();
  EXPECT_THROW(batch_psnr(corpus, VectorSource(copies), quiet()), Error);
}

TEST(DiagnoseTest, Verdicts) {
  const auto records = cmd_diagnose(standard_resizers(), std::nullopt);
  ASSERT_EQ(records.size(), 7u);
  for (const auto& r : records) {
    Verdict expect = Verdict::kFail;
    if (r.variant == "box-aa") expect = Verdict::kWarn;
    if (r.variant == "bicubic-aa" || r.variant == "bilinear-aa" || r.variant == "lanczos3-aa")
      expect = Verdict::kPass;
    EXPECT_EQ(r.verdict, expect) << r.variant << " gap " << r.ring_gap << " energy "
                                 << r.checker_energy;
  }
  const std::string lines = diagnose_json_lines(records);
  std::istringstream in(lines);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const Json j = Json::parse(line);
    EXPECT_TRUE(j.contains("variant"));
    EXPECT_TRUE(j.contains("ring_gap_fraction"));
    EXPECT_TRUE(j.contains("checkerboard_aliasing_energy"));
    EXPECT_TRUE(j.contains("verdict"));
    ++n;
  }
  EXPECT_EQ(n, 7);
}

TEST(DiagnoseTest, Classify) {
  EXPECT_EQ(classify(0.0, 0.0), Verdict::kPass);
  EXPECT_EQ(classify(0.0, 0.01), Verdict::kWarn);
  EXPECT_EQ(classify(0.1, 0.0), Verdict::kWarn);
  EXPECT_EQ(classify(0.5, 0.0), Verdict::kFail);
  EXPECT_EQ(classify(0.0, 50.0), Verdict::kFail);
  EXPECT_STREQ(verdict_symbol(Verdict::kPass), "✓");
  EXPECT_STREQ(verdict_symbol(Verdict::kWarn), "⚠");
  EXPECT_STREQ(verdict_symbol(Verdict::kFail), "✗");
}

TEST(ReportTest, JsonRoundTripAndDifferences) {
  const SideSpec side{"synthetic:6:32", small_chain(16)};
  const MetricReport r = cmd_fid(side, side, &toy(), quiet());
  const MetricReport back = MetricReport::from_json(Json::parse(r.to_json().dump()));
  EXPECT_EQ(back.to_json(), r.to_json());
  EXPECT_TRUE(provenance_differences(r, back).empty());

  MetricReport other = r;
  other.evaluated.source = "elsewhere";
  other.evaluated.count = 99;
  EXPECT_TRUE(provenance_differences(r, other).empty());
  other.evaluated.chain = chain_to_json(stored_resize_chain(Resizer::Parse("nearest"), 16));
  const auto diffs = provenance_differences(r, other);
  ASSERT_EQ(diffs.size(), 1u);
  EXPECT_NE(diffs[0].find("evaluated.chain"), std::string::npos);
  other = r;
  other.metric = "kid";
  EXPECT_FALSE(provenance_differences(r, other).empty());

  EXPECT_THROW(MetricReport::from_json(Json::parse("{}")), Error);
  EXPECT_THROW(MetricReport::from_json(Json::parse(R"({"metric":"is","value":1})")), Error);
}

TEST(ReportTest, CsvFormatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3), "0.333333333");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  CsvTable t({"a", "b"});
  t.add_row({"x", "2.5"});
  EXPECT_THROW(t.add_row({"only"}), Error);
  EXPECT_EQ(t.str(), "a,b\nx,2.5\n");
  const Json j = table_to_json(t);
  EXPECT_EQ(j[0]["a"], "x");
  EXPECT_EQ(j[0]["b"], 2.5);
}

// Runs the CLI through the shell; returns its exit status.
int run_cli(const std::string& args) {
  const std::string cmd = std::string(FIDKIT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, ExitCodes) {
  testing::TempDir dir("cli");
  const std::string d = dir.path().string();
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("--no-such-flag"), 1);
  EXPECT_EQ(run_cli("fid synthetic:4:32 /nonexistent/dir --size 32"), 1);

  ASSERT_EQ(run_cli("fid synthetic:6:32 synthetic:6:32 --size 32 --out " + d + "/a.json"), 0);
  ASSERT_EQ(run_cli("fid synthetic:6:32 synthetic:6:32 --size 32 --eval-resizer nearest --out " +
                    d + "/b.json"),
            0);
  EXPECT_EQ(run_cli("compare " + d + "/a.json " + d + "/a.json"), 0);
  EXPECT_EQ(run_cli("compare " + d + "/a.json " + d + "/b.json"), 2);

  ASSERT_EQ(run_cli("stats synthetic:6:32 --size 32 --out " + d + "/s.cfid"), 0);
  EXPECT_TRUE(std::filesystem::exists(d + "/s.cfid.json"));
  EXPECT_EQ(run_cli("fid " + d + "/s.cfid synthetic:6:32 --size 32 --out " + d + "/c.json"), 0);
  EXPECT_EQ(run_cli("compare " + d + "/a.json " + d + "/c.json"), 0);
}

TEST(CliTest, OutputsIndependentOfThreads) {
  testing::TempDir dir("clithreads");
  const std::string d = dir.path().string();
  for (int t : {1, 3}) {
    const std::string s = std::to_string(t);
    ASSERT_EQ(run_cli("stats synthetic:8:48 --size 32 --threads " + s + " --out " + d + "/s" +
                      s + ".cfid"),
              0);
    ASSERT_EQ(run_cli("sweep jpeg synthetic:8:48 --size 24 --qualities 90,60 --format csv "
                      "--threads " + s + " --out " + d + "/j" + s + ".csv"),
              0);
  }
  EXPECT_EQ(slurp(d + "/s1.cfid"), slurp(d + "/s3.cfid"));
  EXPECT_FALSE(slurp(d + "/j1.csv").empty());
  EXPECT_EQ(slurp(d + "/j1.csv"), slurp(d + "/j3.csv"));
}

}  // namespace
}  // namespace fidkit
