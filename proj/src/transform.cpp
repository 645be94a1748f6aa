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

#include "dctguard/transform.hpp"

#include <cmath>
#include <numbers>

namespace dctguard {
namespace {

// basis[u][x] = C(u)/2 * cos((2x+1) u pi / 16), the 1-D orthonormal DCT matrix.
struct Basis {
  double m[8][8];
  Basis() {
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? std::sqrt(0.5) : 1.0;
      for (int x = 0; x < 8; ++x) {
        m[u][x] = 0.5 * cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const Basis& basis() {
  static const Basis b;
  return b;
}

}  // namespace

CoefBlock dct2(const PixelBlock& block, LevelShift shift) {
  const auto& m = basis().m;
  const double offset = shift == LevelShift::kShift128 ? 128.0 : 0.0;
  double tmp[8][8];
  // Rows first: tmp[y][v] = sum_x m[v][x] * f[y][x].
  for (int y = 0; y < 8; ++y) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int x = 0; x < 8; ++x) s += m[v][x] * (block[y * 8 + x] - offset);
      tmp[y][v] = s;
    }
  }
  CoefBlock out;
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int y = 0; y < 8; ++y) s += m[u][y] * tmp[y][v];
      out[u * 8 + v] = s;
    }
  }
  return out;
}

PixelBlock idct2(const CoefBlock& coefs, LevelShift shift) {
  const auto& m = basis().m;
  const double offset = shift == LevelShift::kShift128 ? 128.0 : 0.0;
  double tmp[8][8];
  // tmp[y][v] = sum_u m[u][y] * F[u][v]
  for (int y = 0; y < 8; ++y) {
    for (int v = 0; v < 8; ++v) {
      double s = 0.0;
      for (int u = 0; u < 8; ++u) s += m[u][y] * coefs[u * 8 + v];
      tmp[y][v] = s;
    }
  }
  PixelBlock out;
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (int v = 0; v < 8; ++v) s += m[v][x] * tmp[y][v];
      out[y * 8 + x] = s + offset;
    }
  }
  return out;
}

std::array<double, 64> zigzag(const CoefBlock& c) {
  std::array<double, 64> v{};
  for (int pos = 0; pos < 64; ++pos) v[pos] = c[kZigzagToBand[pos]];
  return v;
}

CoefBlock unzigzag(const std::array<double, 64>& v) {
  CoefBlock c;
  for (int pos = 0; pos < 64; ++pos) c[kZigzagToBand[pos]] = v[pos];
  return c;
}

}  // namespace dctguard
