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

#include <random>

#include "dctguard/error.hpp"
#include "dctguard/image.hpp"
#include "dctguard/image_io.hpp"
#include "oracles.hpp"

using namespace dctguard;

namespace {

ImageBuffer solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  ImageBuffer img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  }
  return img;
}

Plane random_plane(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-300.0, 300.0);
  Plane p(w, h);
  for (auto& v : p.data) v = d(rng);
  return p;
}

}  // namespace

TEST_CASE("image buffer rejects empty dimensions and short sample vectors") {
  CHECK_THROWS_AS(ImageBuffer(0, 4), Error);
  CHECK_THROWS_AS(ImageBuffer(4, 4, std::vector<std::uint8_t>(47)), Error);
  CHECK_NOTHROW(ImageBuffer(4, 4, std::vector<std::uint8_t>(48)));
}

TEST_CASE("rgb_to_ycbcr on white, black and red") {
  auto white = rgb_to_ycbcr(solid(1, 1, 255, 255, 255));
  CHECK(white.y.data[0] == doctest::Approx(255.0).epsilon(1e-12));
  CHECK(white.cb.data[0] == doctest::Approx(128.0).epsilon(1e-12));
  CHECK(white.cr.data[0] == doctest::Approx(128.0).epsilon(1e-12));

  auto black = rgb_to_ycbcr(solid(1, 1, 0, 0, 0));
  CHECK(black.y.data[0] == 0.0);
  CHECK(black.cb.data[0] == 128.0);
  CHECK(black.cr.data[0] == 128.0);

  const auto want = oracle::ycbcr_of(255, 0, 0);
  auto red = rgb_to_ycbcr(solid(1, 1, 255, 0, 0));
  CHECK(red.y.data[0] == doctest::Approx(want[0]));
  CHECK(red.cb.data[0] == doctest::Approx(want[1]));
  CHECK(want[2] > 255.0);
  CHECK(red.cr.data[0] == 255.0);
  CHECK(to_sample(red.y.data[0]) == 76);
  CHECK(to_sample(red.cb.data[0]) == 85);
}

TEST_CASE("ycbcr_to_rgb neutral points and dimension mismatch") {
  CHECK(ycbcr_to_rgb(Plane(1, 1, 128), Plane(1, 1, 128), Plane(1, 1, 128)) ==
        solid(1, 1, 128, 128, 128));
  CHECK(ycbcr_to_rgb(Plane(1, 1, 255), Plane(1, 1, 128), Plane(1, 1, 128)) ==
        solid(1, 1, 255, 255, 255));
  CHECK_THROWS_AS(ycbcr_to_rgb(Plane(2, 1), Plane(1, 1), Plane(1, 1)), Error);
}

TEST_CASE("colour round trip over all 2^24 colours stays within one level") {
  int worst = 0;
  ImageBuffer img(256, 256);
  for (int r = 0; r < 256; ++r) {
    for (int g = 0; g < 256; ++g) {
      for (int b = 0; b < 256; ++b) {
        img.at(b, g, 0) = static_cast<std::uint8_t>(r);
        img.at(b, g, 1) = static_cast<std::uint8_t>(g);
        img.at(b, g, 2) = static_cast<std::uint8_t>(b);
      }
    }
    const auto ycc = rgb_to_ycbcr(img);
    const auto back = ycbcr_to_rgb(ycc.y, ycc.cb, ycc.cr);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
      worst = std::max(worst, std::abs(int(back.data[i]) - int(img.data[i])));
    }
  }
  CHECK(worst <= 1);
}

TEST_CASE("rgb_to_ycbcr matches the double-precision matrix oracle") {
  std::mt19937_64 rng(7);
  const auto img = fixture::random_image(13, 9, rng);
  const auto ycc = rgb_to_ycbcr(img);
  for (int i = 0; i < 13 * 9; ++i) {
    auto want = oracle::ycbcr_of(img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]);
    for (auto& w : want) w = std::clamp(w, 0.0, 255.0);
    CHECK(ycc.y.data[i] == doctest::Approx(want[0]).epsilon(1e-12));
    CHECK(ycc.cb.data[i] == doctest::Approx(want[1]).epsilon(1e-12));
    CHECK(ycc.cr.data[i] == doctest::Approx(want[2]).epsilon(1e-12));
  }
}

TEST_CASE("subsample_420") {
  SUBCASE("constant plane stays constant at half size") {
    const auto s = subsample_420(Plane(7, 5, 77.0));
    CHECK(s.width == 4);
    CHECK(s.height == 3);
    for (double v : s.data) CHECK(v == 77.0);
  }
  SUBCASE("box average rounds half away from zero") {
    Plane p(2, 2);
    p.data = {0, 0, 0, 255};
    CHECK(subsample_420(p).data == std::vector<double>{64.0});
  }
  SUBCASE("odd sizes are edge replicated") {
    Plane p(3, 3);
    p.data = {0, 0, 10, 0, 0, 10, 20, 20, 30};
    const auto s = subsample_420(p);
    REQUIRE(s.width == 2);
    REQUIRE(s.height == 2);
    CHECK(s.data == std::vector<double>{0, 10, 20, 30});
  }
  SUBCASE("upsample duplicates each sample") {
    Plane p(2, 1);
    p.data = {1, 2};
    const auto u = upsample_420(p, 3, 2);
    CHECK(u.data == std::vector<double>{1, 1, 2, 1, 1, 2});
  }
}

TEST_CASE("split_blocks and merge_blocks") {
  CHECK(split_blocks(Plane(16, 8)).blocks.size() == 2);
  const auto g = split_blocks(Plane(10, 10));
  CHECK(g.blocks.size() == 4);
  CHECK(g.pad_right == 6);
  CHECK(g.pad_bottom == 6);

  std::mt19937_64 rng(11);
  for (int w = 1; w <= 19; w += 3) {
    for (int h = 1; h <= 19; h += 5) {
      const Plane p = random_plane(w, h, rng);
      const auto grid = split_blocks(p);
      CHECK(grid.blocks.size() == std::size_t((w + 7) / 8) * ((h + 7) / 8));
      CHECK(merge_blocks(grid) == p);
    }
  }
}

TEST_CASE("padding replicates the last row and column") {
  Plane p(9, 1);
  for (int x = 0; x < 9; ++x) p.at(x, 0) = x;
  const auto g = split_blocks(p);
  REQUIRE(g.blocks.size() == 2);
  for (int r = 0; r < 8; ++r) {
    CHECK(g.blocks[1][r * 8 + 0] == 8.0);
    CHECK(g.blocks[1][r * 8 + 7] == 8.0);
    CHECK(g.blocks[0][r * 8 + 3] == 3.0);
  }
}

TEST_CASE("colour path names") {
  CHECK(parse_color_path("rgb") == ColorPath::kRgb);
  CHECK(parse_color_path("ycbcr420") == ColorPath::kYCbCr420);
  CHECK(to_string(ColorPath::kYCbCr420) == "ycbcr420");
  CHECK_THROWS_AS(parse_color_path("yuv"), Error);
}

TEST_CASE("png and ppm round trip; alpha is rejected with its own error") {
  fixture::TempDir dir("io");
  std::mt19937_64 rng(3);
  const auto img = fixture::random_image(17, 5, rng);
  write_image(dir.path() / "a.png", img);
  write_image(dir.path() / "a.ppm", img);
  CHECK(read_image(dir.path() / "a.png") == img);
  CHECK(read_image(dir.path() / "a.ppm") == img);

  CHECK_THROWS_AS(read_image(DCTGUARD_TEST_DATA "/alpha.png"), AlphaChannelError);
  write_file(dir.path() / "alpha.pam",
             std::vector<unsigned char>{'P', '7', '\n', 'W', 'I', 'D', 'T', 'H', ' ', '1', '\n'});
  CHECK_THROWS_AS(read_image(dir.path() / "alpha.pam"), AlphaChannelError);
  CHECK_THROWS_AS(read_image(DCTGUARD_TEST_DATA "/deep16.png"), Error);
  CHECK_THROWS_AS(read_image(dir.path() / "missing.png"), Error);

  const auto names = list_images(fixture::photo_dir());
  REQUIRE(names.size() == 100);
  CHECK(std::is_sorted(names.begin(), names.end()));
}
