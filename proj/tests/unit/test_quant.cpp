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
#include "dctguard/quant.hpp"
#include "oracles.hpp"

using namespace dctguard;

namespace {

CoefBlock single(double v) {
  CoefBlock c;
  c[0] = v;
  return c;
}

}  // namespace

TEST_CASE("quantize examples") {
  QuantizationTrace tr;
  auto lv = quantize(single(35.0), QuantTable::uniform(16), &tr);
  CHECK(lv[0] == 2);
  CHECK(tr.reconstructed[0] == 32.0);
  CHECK(tr.remainder[0] == 3.0);

  lv = quantize(single(-24.0), QuantTable::uniform(16), &tr);
  CHECK(lv[0] == -2);
  CHECK(dequantize(lv, QuantTable::uniform(16))[0] == -32.0);
  CHECK(tr.remainder[0] == 8.0);

  CoefBlock ints;
  for (int i = 0; i < 64; ++i) ints[i] = i * 37 - 1000;
  CHECK(dequantize(quantize(ints, QuantTable()), QuantTable()) == ints);
  CHECK(dequantize(Levels{}, QuantTable::uniform(9)) == CoefBlock{});
}

TEST_CASE("trace decomposition and reconstruction bound") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-2040.0, 2040.0);
  std::uniform_int_distribution<int> s(1, 255);
  for (int t = 0; t < 500; ++t) {
    std::array<int, 64> steps;
    for (auto& v : steps) v = s(rng);
    const QuantTable table(steps);
    CoefBlock c;
    for (auto& v : c.coefs) v = d(rng);
    QuantizationTrace tr;
    const auto lv = quantize(c, table, &tr);
    const auto back = dequantize(lv, table);
    for (int b = 0; b < 64; ++b) {
      const double qs = table.at_band(b);
      CHECK(c[b] == tr.level[b] * qs + tr.remainder[b]);
      CHECK(std::abs(tr.remainder[b]) <= qs / 2);
      CHECK(std::abs(c[b] - back[b]) <= qs / 2);
      CHECK(back[b] == tr.reconstructed[b]);
    }
  }
}

TEST_CASE("a perturbation within half a step moves the level by at most one") {
  for (int qs : {1, 2, 7, 16, 50}) {
    for (double rho = -qs / 2.0; rho <= qs / 2.0; rho += 0.25) {
      for (double c = -3.0 * qs; c <= 3.0 * qs; c += 0.125) {
        const double diff = quantize_coef(c + rho, qs) * qs - quantize_coef(c, qs) * qs;
        CHECK((diff == 0.0 || std::abs(diff) == qs));
      }
    }
  }
}

TEST_CASE("table validation and layout") {
  std::array<int, 64> bad{};
  bad.fill(1);
  bad[5] = 0;
  CHECK_THROWS_AS(QuantTable{bad}, Error);
  bad[5] = 256;
  CHECK_THROWS_AS(QuantTable{bad}, Error);

  std::array<int, 64> rm;
  for (int i = 0; i < 64; ++i) rm[i] = i + 1;
  const auto t = QuantTable::from_row_major(rm);
  CHECK(t.row_major() == rm);
  for (int b = 0; b < 64; ++b) CHECK(t.at_band(b) == b + 1);
  CHECK(t.at_zigzag(2) == 9);
  CHECK(quant_table_from_json(to_json(t)) == t);
  CHECK(to_json(t)["format"] == 1);
  CHECK_THROWS_AS(quant_table_from_json(nlohmann::json{{"format", 2}}), Error);
}

TEST_CASE("levels saturate at the int16 range") {
  CHECK(quantize_coef(1e9, 1) == 32767);
  CHECK(quantize_coef(-1e9, 1) == -32768);
}

TEST_CASE("removal probability") {
  CHECK(removal_probability(0.0, 16) == 1.0);
  CHECK(removal_probability(8.0, 16) == 0.5);
  CHECK(removal_probability(-4.0, 16) == 0.75);
  CHECK_THROWS_AS(removal_probability(8.5, 16), Error);
  CHECK(std::abs(measure_removal_rate(4.0, 16, 1000000, 1) - 0.75) <= 0.003);
}
