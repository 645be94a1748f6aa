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

#include "dctguard/transform.hpp"
#include "oracles.hpp"

using namespace dctguard;

namespace {

PixelBlock random_block(std::mt19937_64& rng, double lo = 0.0, double hi = 255.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  PixelBlock b;
  for (auto& v : b) v = d(rng);
  return b;
}

PixelBlock constant(double c) {
  PixelBlock b;
  b.fill(c);
  return b;
}

}  // namespace

TEST_CASE("dct2 of constant blocks") {
  for (double v : dct2(constant(128.0)).coefs) CHECK(v == doctest::Approx(0.0));
  const auto c = dct2(constant(100.0));
  CHECK(c[0] == doctest::Approx(-224.0));
  for (int i = 1; i < 64; ++i) CHECK(c[i] == doctest::Approx(0.0));
}

TEST_CASE("idct2 of zero and DC impulse") {
  for (double v : idct2(CoefBlock{})) CHECK(v == doctest::Approx(128.0));
  CoefBlock dc;
  dc[0] = 8.0;
  for (double v : idct2(dc, LevelShift::kNone)) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("dct2 agrees with the direct quadruple sum") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto b = random_block(rng);
    const auto want = oracle::naive_dct(b, 128.0);
    const auto got = dct2(b);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-9);
    const auto want0 = oracle::naive_dct(b, 0.0);
    const auto got0 = dct2(b, LevelShift::kNone);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(got0[i] - want0[i]) < 1e-9);
  }
}

TEST_CASE("inverse, Parseval and linearity on random blocks") {
  std::mt19937_64 rng(9);
  double worst_inv = 0.0, worst_parseval = 0.0, worst_lin = 0.0;
  for (int t = 0; t < 2000; ++t) {
    const auto x = random_block(rng);
    const auto r = random_block(rng, -8.0, 8.0);
    const auto c = dct2(x);
    const auto back = idct2(c);
    double e_pix = 0.0, e_coef = 0.0;
    for (int i = 0; i < 64; ++i) {
      worst_inv = std::max(worst_inv, std::abs(back[i] - x[i]));
      e_pix += (x[i] - 128.0) * (x[i] - 128.0);
      e_coef += c[i] * c[i];
    }
    worst_parseval = std::max(worst_parseval, std::abs(e_pix - e_coef) / e_pix);
    PixelBlock sum;
    for (int i = 0; i < 64; ++i) sum[i] = x[i] + r[i];
    const auto cs = dct2(sum, LevelShift::kNone);
    const auto cx = dct2(x, LevelShift::kNone);
    const auto cr = dct2(r, LevelShift::kNone);
    for (int i = 0; i < 64; ++i) {
      worst_lin = std::max(worst_lin, std::abs(cs[i] - cx[i] - cr[i]));
    }
  }
  CHECK(worst_inv < 1e-9);
  CHECK(worst_parseval < 1e-6);
  CHECK(worst_lin < 1e-9);
}

TEST_CASE("level shift cancels in differences") {
  std::mt19937_64 rng(2);
  const auto x = random_block(rng);
  const auto y = random_block(rng);
  PixelBlock d;
  for (int i = 0; i < 64; ++i) d[i] = x[i] - y[i];
  const auto cx = dct2(x), cy = dct2(y), cd = dct2(d, LevelShift::kNone);
  for (int i = 0; i < 64; ++i) CHECK(std::abs(cx[i] - cy[i] - cd[i]) < 1e-9);
}

TEST_CASE("zigzag order") {
  const int first[6][2] = {{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}};
  for (int p = 0; p < 6; ++p) CHECK(kZigzagToBand[p] == first[p][0] * 8 + first[p][1]);
  CHECK(kZigzagToBand[63] == 63);
  CHECK(kZigzagToBand == oracle::zigzag_walk());
  for (int p = 0; p < 64; ++p) CHECK(kBandToZigzag[kZigzagToBand[p]] == p);

  CoefBlock c;
  for (int i = 0; i < 64; ++i) c[i] = i * 1.5 - 7;
  CHECK(unzigzag(zigzag(c)) == c);
  const auto z = zigzag(c);
  for (int p = 0; p < 64; ++p) CHECK(z[p] == c[kZigzagToBand[p]]);
}
