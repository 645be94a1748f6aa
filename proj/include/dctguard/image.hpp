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
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace dctguard {

// 8-bit RGB image, samples interleaved row by row.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  ImageBuffer() = default;
  ImageBuffer(int w, int h);
  ImageBuffer(int w, int h, std::vector<std::uint8_t> samples);

  std::uint8_t& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }

  bool operator==(const ImageBuffer&) const = default;
};

// Single real-valued channel.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Plane() = default;
  Plane(int w, int h, double fill = 0.0);

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }

  bool operator==(const Plane&) const = default;
};

// 8x8 samples, row-major.
using PixelBlock = std::array<double, 64>;

struct BlockGrid {
  std::vector<PixelBlock> blocks;  // raster order
  int orig_width = 0;
  int orig_height = 0;
  int pad_right = 0;
  int pad_bottom = 0;

  int blocks_x() const { return (orig_width + pad_right) / 8; }
  int blocks_y() const { return (orig_height + pad_bottom) / 8; }
};

enum class ColorPath { kRgb, kYCbCr420 };

std::string_view to_string(ColorPath path);
ColorPath parse_color_path(std::string_view text);

// Half away from zero.
inline double round_half_away(double v) { return std::round(v); }

inline std::uint8_t to_sample(double v) {
  double r = round_half_away(v);
  if (r < 0.0) r = 0.0;
  if (r > 255.0) r = 255.0;
  return static_cast<std::uint8_t>(r);
}

struct YCbCrPlanes {
  Plane y;
  Plane cb;
  Plane cr;
};

// Full-range BT.601 (the JPEG/JFIF convention). Outputs are clamped to
// [0,255] but left unrounded.
YCbCrPlanes rgb_to_ycbcr(const ImageBuffer& img);

// Throws a validation error when the three planes differ in size.
ImageBuffer ycbcr_to_rgb(const Plane& y, const Plane& cb, const Plane& cr);

Plane channel_plane(const ImageBuffer& img, int channel);
ImageBuffer planes_to_image(const Plane& r, const Plane& g, const Plane& b);

// 2x2 box average, rounded to the nearest sample. Odd dimensions are padded
// by edge replication, so the output is ceil(w/2) x ceil(h/2).
Plane subsample_420(const Plane& plane);

// Nearest-neighbour duplication back to (width, height).
Plane upsample_420(const Plane& plane, int width, int height);

// Edge-replicating split into 8x8 blocks and its exact inverse.
BlockGrid split_blocks(const Plane& plane);
Plane merge_blocks(const BlockGrid& grid);

}  // namespace dctguard
