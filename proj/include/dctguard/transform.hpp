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

#pragma once

#include <array>
#include <cstddef>

#include "dctguard/image.hpp"

namespace dctguard {

// 64 DCT coefficients, row-major: index = row_frequency * 8 + col_frequency.
// coefs[0] is the DC term.
struct CoefBlock {
  std::array<double, 64> coefs{};

  double& operator[](std::size_t i) { return coefs[i]; }
  double operator[](std::size_t i) const { return coefs[i]; }
  bool operator==(const CoefBlock&) const = default;
};

enum class LevelShift : bool { kNone = false, kShift128 = true };

// Orthonormal 8x8 DCT-II (JPEG scaling). With kShift128 the block is centred
// on zero first, so a constant block of value c has DC = 8 * (c - 128).
CoefBlock dct2(const PixelBlock& block, LevelShift shift = LevelShift::kShift128);
PixelBlock idct2(const CoefBlock& coefs, LevelShift shift = LevelShift::kShift128);

// Zigzag position -> row-major band index.
inline constexpr std::array<int, 64> kZigzagToBand = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

// Row-major band index -> zigzag position.
inline constexpr std::array<int, 64> kBandToZigzag = [] {
  std::array<int, 64> inv{};
  for (int pos = 0; pos < 64; ++pos) inv[kZigzagToBand[pos]] = pos;
  return inv;
}();

std::array<double, 64> zigzag(const CoefBlock& c);
CoefBlock unzigzag(const std::array<double, 64>& v);

}  // namespace dctguard
