// Copyright 2026 The dctguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "dctguard/error.hpp"
#include "dctguard/freq_stats.hpp"
#include "dctguard/image_io.hpp"
#include "dctguard/transform.hpp"
#include "oracles.hpp"

using namespace dctguard;

namespace {

// Planes whose blocks are idct2 of coefficients with per-band std sigma[b].
std::vector<Plane> synthetic_corpus(const std::array<double, 64>& sigma, int n_blocks,
                                    std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Plane> planes;
  const int per_plane = 100;
  for (int made = 0; made < n_blocks; made += per_plane) {
    BlockGrid grid;
    grid.orig_width = 8 * per_plane;
    grid.orig_height = 8;
    for (int b = 0; b < per_plane; ++b) {
      CoefBlock c;
      for (int i = 0; i < 64; ++i) c[i] = scale * sigma[i] * g(rng);
      grid.blocks.push_back(idct2(c, LevelShift::kNone));
    }
    planes.push_back(merge_blocks(grid));
  }
  return planes;
}

BandStats stats_with(ChannelTag tag, const std::array<double, 64>& delta) {
  BandStats s;
  s.channel = tag;
  s.delta = delta;
  s.n_blocks = 100;
  return s;
}

std::array<double, 64> random_positive(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.01, 50.0);
  std::array<double, 64> a;
  for (auto& v : a) v = d(rng);
  return a;
}

// Independent sort over (ratio, zigzag position).
std::array<int, 64> reference_order(const std::array<double, 64>& ratio) {
  std::vector<std::pair<std::pair<double, int>, int>> keyed;
  for (int b = 0; b < 64; ++b) keyed.push_back({{ratio[b], kBandToZigzag[b]}, b});
  std::sort(keyed.begin(), keyed.end());
  std::array<int, 64> out;
  for (int i = 0; i < 64; ++i) out[i] = keyed[i].second;
  return out;
}

}  // namespace

TEST_CASE("constant corpus has zero deviation in every band") {
  std::vector<ImageBuffer> corpus(3, ImageBuffer(16, 16, std::vector<std::uint8_t>(768, 90)));
  for (ChannelTag tag : kAllChannels) {
    const auto s = estimate_band_stats(std::span<const ImageBuffer>(corpus), tag, 1);
    for (double d : s.delta) CHECK(d == doctest::Approx(0.0));
  }
}

TEST_CASE("synthetic corpus recovers the generator sigma within 3%") {
  std::array<double, 64> sigma;
  for (int b = 0; b < 64; ++b) sigma[b] = 1.0 + 60.0 / (1 + b);
  const auto planes = synthetic_corpus(sigma, 10000, 42);
  const auto s = estimate_band_stats(std::span<const Plane>(planes), ChannelTag::kR, 1);
  CHECK(s.n_blocks == 10000);
  for (int b = 0; b < 64; ++b) CHECK(std::abs(s.delta[b] / sigma[b] - 1.0) < 0.03);
}

TEST_CASE("scaling deviations scales every delta") {
  std::array<double, 64> sigma;
  sigma.fill(3.0);
  const auto base = synthetic_corpus(sigma, 400, 7, 1.0);
  auto scaled = base;
  for (auto& p : scaled) {
    for (auto& v : p.data) v *= -2.5;
  }
  const auto a = estimate_band_stats(std::span<const Plane>(base), ChannelTag::kG, 1);
  const auto b = estimate_band_stats(std::span<const Plane>(scaled), ChannelTag::kG, 1);
  for (int i = 0; i < 64; ++i) CHECK(b.delta[i] == doctest::Approx(2.5 * a.delta[i]));
}

TEST_CASE("stats are independent of corpus order and job count") {
  auto corpus = read_image_dir(fixture::photo_dir());
  corpus.resize(20);
  std::vector<ImageBuffer> images;
  for (auto& n : corpus) images.push_back(n.image);
  auto reversed = images;
  std::reverse(reversed.begin(), reversed.end());
  for (ChannelTag tag : {ChannelTag::kY, ChannelTag::kCr}) {
    const auto a = estimate_band_stats(std::span<const ImageBuffer>(images), tag, 1);
    const auto b = estimate_band_stats(std::span<const ImageBuffer>(images), tag, 4);
    const auto c = estimate_band_stats(std::span<const ImageBuffer>(reversed), tag, 3);
    CHECK(a.delta == b.delta);
    for (int i = 0; i < 64; ++i) CHECK(c.delta[i] == doctest::Approx(a.delta[i]).epsilon(1e-12));
  }
}

TEST_CASE("a single block is not enough") {
  std::vector<ImageBuffer> one(1, ImageBuffer(8, 8));
  CHECK_THROWS_AS(estimate_band_stats(std::span<const ImageBuffer>(one), ChannelTag::kR, 1),
                  Error);
  std::vector<ImageBuffer> none;
  CHECK_THROWS_AS(estimate_band_stats(std::span<const ImageBuffer>(none), ChannelTag::kR, 1),
                  Error);
}

TEST_CASE("chroma through 4:2:0 is smoother than every full-resolution channel") {
  const auto named = read_image_dir(fixture::photo_dir());
  std::vector<ImageBuffer> images;
  for (auto& n : named) images.push_back(n.image);
  std::map<ChannelTag, double> mean_ac;
  for (ChannelTag tag : kAllChannels) {
    const auto s = estimate_band_stats(std::span<const ImageBuffer>(images), tag, 1);
    mean_ac[tag] = std::accumulate(s.delta.begin() + 1, s.delta.end(), 0.0) / 63.0;
  }
  for (ChannelTag chroma : {ChannelTag::kCb, ChannelTag::kCr}) {
    for (ChannelTag full : {ChannelTag::kR, ChannelTag::kG, ChannelTag::kB, ChannelTag::kY}) {
      CHECK(mean_ac[chroma] < mean_ac[full]);
    }
  }
}

TEST_CASE("band_ratio ordering") {
  std::array<double, 64> d;
  d.fill(5.0);
  auto r = band_ratio(stats_with(ChannelTag::kR, d), stats_with(ChannelTag::kR, d));
  for (double v : r.ratio) CHECK(v == 1.0);
  CHECK(r.order == kZigzagToBand);

  auto a = d;
  a[63] = 10.0;
  r = band_ratio(stats_with(ChannelTag::kR, a), stats_with(ChannelTag::kR, d));
  CHECK(r.order[63] == 63);

  CHECK_THROWS_AS(band_ratio(stats_with(ChannelTag::kR, d), stats_with(ChannelTag::kG, d)),
                  Error);

  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const auto adv = random_positive(rng);
    const auto ben = random_positive(rng);
    r = band_ratio(stats_with(ChannelTag::kY, adv), stats_with(ChannelTag::kY, ben));
    std::array<double, 64> want;
    for (int b = 0; b < 64; ++b) want[b] = adv[b] / ben[b];
    CHECK(r.ratio == want);
    CHECK(r.order == reference_order(want));
  }
}

TEST_CASE("zero-variance bands stay finite and positive") {
  std::array<double, 64> zero{};
  std::array<double, 64> some;
  some.fill(2.0);
  const auto r = band_ratio(stats_with(ChannelTag::kB, zero), stats_with(ChannelTag::kB, zero));
  for (double v : r.ratio) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
  const auto r2 = band_ratio(stats_with(ChannelTag::kB, some), stats_with(ChannelTag::kB, zero));
  CHECK(r2.ratio[5] == doctest::Approx(2.0 / kRatioFloor));
}

TEST_CASE("merge_rgb_ratio") {
  std::mt19937_64 rng(21);
  const auto a = random_positive(rng);
  const auto b = random_positive(rng);
  std::vector<StatsPair> same;
  for (ChannelTag t : {ChannelTag::kR, ChannelTag::kG, ChannelTag::kB}) {
    same.push_back({stats_with(t, a), stats_with(t, b)});
  }
  const auto single = band_ratio(stats_with(ChannelTag::kR, a), stats_with(ChannelTag::kR, b));
  auto merged = merge_rgb_ratio(same);
  CHECK(merged.order == single.order);
  for (int i = 0; i < 64; ++i) CHECK(merged.ratio[i] == doctest::Approx(single.ratio[i]));

  std::vector<StatsPair> pairs;
  std::array<std::array<double, 64>, 3> as, bs;
  int c = 0;
  for (ChannelTag t : {ChannelTag::kB, ChannelTag::kR, ChannelTag::kG}) {
    as[c] = random_positive(rng);
    bs[c] = random_positive(rng);
    pairs.push_back({stats_with(t, as[c]), stats_with(t, bs[c])});
    ++c;
  }
  merged = merge_rgb_ratio(pairs);
  for (int i = 0; i < 64; ++i) {
    const double ma = (as[0][i] + as[1][i] + as[2][i]) / 3.0;
    const double mb = (bs[0][i] + bs[1][i] + bs[2][i]) / 3.0;
    CHECK(merged.ratio[i] == doctest::Approx(ma / mb).epsilon(1e-12));
  }

  std::vector<StatsPair> uniform_pairs;
  for (ChannelTag t : {ChannelTag::kR, ChannelTag::kG, ChannelTag::kB}) {
    uniform_pairs.push_back({stats_with(t, a), stats_with(t, b)});
  }
  auto scaled_uniform = uniform_pairs;
  for (int i = 0; i < 64; ++i) {
    scaled_uniform[2].adv.delta[i] *= 3.0;
    scaled_uniform[2].ben.delta[i] *= 3.0;
  }
  const auto r1 = merge_rgb_ratio(uniform_pairs);
  const auto r2 = merge_rgb_ratio(scaled_uniform);
  for (int i = 0; i < 64; ++i) CHECK(r2.ratio[i] == doctest::Approx(r1.ratio[i]));

  pairs[2].adv.channel = pairs[2].ben.channel = ChannelTag::kY;
  CHECK_THROWS_AS(merge_rgb_ratio(pairs), Error);
}

TEST_CASE("stats and ratio json round trip") {
  std::mt19937_64 rng(1);
  const auto s = stats_with(ChannelTag::kCb, random_positive(rng));
  const auto j = stats_file_json(std::vector<BandStats>{s});
  CHECK(j["format"] == 1);
  const auto back = stats_from_file_json(j);
  REQUIRE(back.size() == 1);
  CHECK(back[0].delta == s.delta);
  CHECK(back[0].channel == ChannelTag::kCb);

  const auto r = band_ratio(s, stats_with(ChannelTag::kCb, random_positive(rng)));
  const auto rj = to_json(r);
  CHECK(rj["format"] == 1);
  CHECK(band_ratio_from_json(rj).order == r.order);
  auto broken = rj;
  broken["order"][0] = broken["order"][1];
  CHECK_THROWS_AS(band_ratio_from_json(broken), Error);
}
