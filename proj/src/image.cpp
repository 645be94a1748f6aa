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

#include "dctguard/image.hpp"

#include <algorithm>
#include <string>

#include "dctguard/error.hpp"

namespace dctguard {

ImageBuffer::ImageBuffer(int w, int h)
    : ImageBuffer(w, h, std::vector<std::uint8_t>(w > 0 && h > 0 ? std::size_t(w) * h * 3 : 0)) {}

ImageBuffer::ImageBuffer(int w, int h, std::vector<std::uint8_t> samples)
    : width(w), height(h), data(std::move(samples)) {
  if (w < 1 || h < 1) {
    throw validation_error("image dimensions must be positive");
  }
  if (data.size() != static_cast<std::size_t>(w) * h * 3) {
    throw validation_error("sample count does not match " + std::to_string(w) +
                           "x" + std::to_string(h) + "x3");
  }
}

Plane::Plane(int w, int h, double fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

std::string_view to_string(ColorPath path) {
  return path == ColorPath::kRgb ? "rgb" : "ycbcr420";
}

ColorPath parse_color_path(std::string_view text) {
  if (text == "rgb" || text == "RGB") return ColorPath::kRgb;
  if (text == "ycbcr420" || text == "YCbCr420") return ColorPath::kYCbCr420;
  throw usage_error("unknown color path '" + std::string(text) +
                    "' (expected rgb or ycbcr420)");
}

namespace {

double clamp255(double v) { return std::clamp(v, 0.0, 255.0); }

}  // namespace

YCbCrPlanes rgb_to_ycbcr(const ImageBuffer& img) {
  YCbCrPlanes out{Plane(img.width, img.height), Plane(img.width, img.height),
                  Plane(img.width, img.height)};
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.data[3 * i];
    const double g = img.data[3 * i + 1];
    const double b = img.data[3 * i + 2];
    out.y.data[i] = clamp255(0.299 * r + 0.587 * g + 0.114 * b);
    out.cb.data[i] = clamp255(128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b);
    out.cr.data[i] = clamp255(128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b);
  }
  return out;
}

ImageBuffer ycbcr_to_rgb(const Plane& y, const Plane& cb, const Plane& cr) {
  if (y.width != cb.width || y.width != cr.width || y.height != cb.height ||
      y.height != cr.height) {
    throw validation_error("ycbcr_to_rgb: plane dimensions differ");
  }
  ImageBuffer out(y.width, y.height);
  const std::size_t n = y.data.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double l = y.data[i];
    const double u = cb.data[i] - 128.0;
    const double v = cr.data[i] - 128.0;
    out.data[3 * i] = to_sample(l + 1.402 * v);
    out.data[3 * i + 1] = to_sample(l - 0.344136 * u - 0.714136 * v);
    out.data[3 * i + 2] = to_sample(l + 1.772 * u);
  }
  return out;
}

Plane channel_plane(const ImageBuffer& img, int channel) {
  Plane p(img.width, img.height);
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    p.data[i] = img.data[3 * i + channel];
  }
  return p;
}

ImageBuffer planes_to_image(const Plane& r, const Plane& g, const Plane& b) {
  if (r.width != g.width || r.width != b.width || r.height != g.height ||
      r.height != b.height) {
    throw validation_error("planes_to_image: plane dimensions differ");
  }
  ImageBuffer out(r.width, r.height);
  for (std::size_t i = 0; i < r.data.size(); ++i) {
    out.data[3 * i] = to_sample(r.data[i]);
    out.data[3 * i + 1] = to_sample(g.data[i]);
    out.data[3 * i + 2] = to_sample(b.data[i]);
  }
  return out;
}

Plane subsample_420(const Plane& plane) {
  const int ow = (plane.width + 1) / 2;
  const int oh = (plane.height + 1) / 2;
  Plane out(ow, oh);
  auto sample = [&](int x, int y) {
    return plane.at(std::min(x, plane.width - 1), std::min(y, plane.height - 1));
  };
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      const double sum = sample(2 * x, 2 * y) + sample(2 * x + 1, 2 * y) +
                         sample(2 * x, 2 * y + 1) + sample(2 * x + 1, 2 * y + 1);
      out.at(x, y) = clamp255(round_half_away(sum / 4.0));
    }
  }
  return out;
}

Plane upsample_420(const Plane& plane, int width, int height) {
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(y / 2, plane.height - 1);
    for (int x = 0; x < width; ++x) {
      out.at(x, y) = plane.at(std::min(x / 2, plane.width - 1), sy);
    }
  }
  return out;
}

BlockGrid split_blocks(const Plane& plane) {
  BlockGrid grid;
  grid.orig_width = plane.width;
  grid.orig_height = plane.height;
  const int bx = (plane.width + 7) / 8;
  const int by = (plane.height + 7) / 8;
  grid.pad_right = bx * 8 - plane.width;
  grid.pad_bottom = by * 8 - plane.height;
  grid.blocks.resize(static_cast<std::size_t>(bx) * by);
  for (int j = 0; j < by; ++j) {
    for (int i = 0; i < bx; ++i) {
      PixelBlock& block = grid.blocks[static_cast<std::size_t>(j) * bx + i];
      for (int r = 0; r < 8; ++r) {
        const int y = std::min(j * 8 + r, plane.height - 1);
        for (int c = 0; c < 8; ++c) {
          const int x = std::min(i * 8 + c, plane.width - 1);
          block[r * 8 + c] = plane.at(x, y);
        }
      }
    }
  }
  return grid;
}

Plane merge_blocks(const BlockGrid& grid) {
  const int bx = grid.blocks_x();
  const int by = grid.blocks_y();
  if (grid.blocks.size() != static_cast<std::size_t>(bx) * by) {
    throw validation_error("merge_blocks: block count does not match geometry");
  }
  Plane out(grid.orig_width, grid.orig_height);
  for (int y = 0; y < grid.orig_height; ++y) {
    for (int x = 0; x < grid.orig_width; ++x) {
      const PixelBlock& block =
          grid.blocks[static_cast<std::size_t>(y / 8) * bx + x / 8];
      out.at(x, y) = block[(y % 8) * 8 + x % 8];
    }
  }
  return out;
}

}  // namespace dctguard
