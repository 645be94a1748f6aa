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
#include "dctguard/image_io.hpp"
#include "dctguard/perturb.hpp"
#include "dctguard/transform.hpp"
#include "oracles.hpp"

using namespace dctguard;

TEST_CASE("zero budget is the identity") {
  std::mt19937_64 rng(1);
  const auto img = fixture::random_image(9, 7, rng);
  for (PerturbKind kind : {PerturbKind::kSign, PerturbKind::kUniform, PerturbKind::kGaussian}) {
    PerturbSpec spec;
    spec.kind = kind;
    spec.eps = 0.0;
    spec.sigma = 0.0;
    const auto r = apply_perturbation(img, spec);
    CHECK(r.image == img);
    for (const auto& p : r.raw_residual) {
      for (double v : p.data) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("sign noise at eps 0.008 injects exactly plus or minus two") {
  const ImageBuffer img(20, 20, std::vector<std::uint8_t>(1200, 128));
  PerturbSpec spec;
  spec.eps = 0.008;
  CHECK(spec.amplitude() == 2);
  const auto r = apply_perturbation(img, spec, 3);
  int plus = 0;
  for (const auto& p : r.raw_residual) {
    for (double v : p.data) {
      CHECK((v == 2.0 || v == -2.0));
      plus += v > 0;
    }
  }
  CHECK(plus > 500);
  CHECK(plus < 700);
}

TEST_CASE("residuals respect the budget, clamping and determinism") {
  std::mt19937_64 rng(2);
  const auto img = fixture::random_image(32, 24, rng);
  for (PerturbKind kind : {PerturbKind::kSign, PerturbKind::kUniform}) {
    PerturbSpec spec;
    spec.kind = kind;
    spec.eps = 0.02;
    const auto a = apply_perturbation(img, spec, 5);
    const auto b = apply_perturbation(img, spec, 5);
    const auto c = apply_perturbation(img, spec, 6);
    CHECK(a.image == b.image);
    CHECK(!(a.image == c.image));
    for (int ch = 0; ch < 3; ++ch) {
      for (std::size_t i = 0; i < a.raw_residual[ch].data.size(); ++i) {
        const double raw = a.raw_residual[ch].data[i];
        CHECK(std::abs(raw) <= spec.amplitude());
        const int orig = img.data[3 * i + ch];
        CHECK(a.image.data[3 * i + ch] == std::clamp(orig + int(raw), 0, 255));
        CHECK(a.residual[ch].data[i] == double(a.image.data[3 * i + ch]) - orig);
      }
    }
  }
}

TEST_CASE("residual means vanish") {
  const ImageBuffer img(200, 200, std::vector<std::uint8_t>(120000, 128));
  for (PerturbKind kind : {PerturbKind::kSign, PerturbKind::kUniform, PerturbKind::kGaussian}) {
    PerturbSpec spec;
    spec.kind = kind;
    spec.eps = 0.03;
    spec.sigma = 4.0;
    const auto r = apply_perturbation(img, spec);
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (const auto& p : r.raw_residual) {
      for (double v : p.data) {
        sum += v;
        sq += v * v;
        ++n;
      }
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean) <= 3.0 * sd / std::sqrt(double(n)));
  }
}

TEST_CASE("gaussian kind follows sigma") {
  const ImageBuffer img(200, 200, std::vector<std::uint8_t>(120000, 128));
  PerturbSpec spec;
  spec.kind = PerturbKind::kGaussian;
  spec.sigma = 5.0;
  const auto r = apply_perturbation(img, spec);
  double sq = 0.0;
  for (double v : r.raw_residual[1].data) sq += v * v;
  // Rounding adds 1/12 to the variance.
  CHECK(std::sqrt(sq / 40000) == doctest::Approx(std::sqrt(25.0 + 1.0 / 12)).epsilon(0.02));
}

TEST_CASE("PerturbSpec validation") {
  PerturbSpec spec;
  spec.eps = 0.2;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.eps = -0.1;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.eps = 0.01;
  spec.sigma = -1;
  CHECK_THROWS_AS(spec.validate(), Error);
  CHECK(parse_perturb_kind("uniform") == PerturbKind::kUniform);
  CHECK_THROWS_AS(parse_perturb_kind("fgsm"), Error);
}

TEST_CASE("DCT bound") {
  PixelBlock zero{};
  CHECK(check_dct_bound(zero, 0.004) == 0.0);
  PixelBlock plus;
  plus.fill(1.0);
  // round(0.004 * 255) = 1 and the bound is 8.16; the all-plus block reaches 8.
  CHECK(check_dct_bound(plus, 0.004) == doctest::Approx(8.0));
  PerturbSpec spec;
  spec.eps = 1.0 / 255;
  plus.fill(spec.amplitude());
  CHECK(dct2(plus, LevelShift::kNone)[0] == doctest::Approx(8.0 * 255 * spec.eps));

  spec.eps = 0.004;
  const auto rep = verify_dct_bound(spec, 20000);
  CHECK(rep.max_overall <= 8.16);
  CHECK(rep.bound == doctest::Approx(8.16));

  PixelBlock big{};
  big[0] = 40.0;
  CHECK_THROWS_WITH_AS(check_dct_bound(big, 0.004), doctest::Contains("band"), Error);
  spec.kind = PerturbKind::kGaussian;
  CHECK_THROWS_AS(verify_dct_bound(spec, 10), Error);
}

TEST_CASE("residual files round trip") {
  fixture::TempDir dir("res");
  std::array<Plane, 3> r{Plane(5, 3), Plane(5, 3), Plane(5, 3)};
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < r[c].data.size(); ++i) r[c].data[i] = int(i * 7) - 40 + c;
  }
  write_residual(dir.path() / "x.res", r);
  CHECK(read_residual(dir.path() / "x.res") == r);
  write_file(dir.path() / "bad.res", std::vector<unsigned char>{'D', 'S', 'R', '1', 1});
  CHECK_THROWS_AS(read_residual(dir.path() / "bad.res"), Error);
}
