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

#include "dctguard/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dctguard/error.hpp"
#include "dctguard/image_io.hpp"

namespace dctguard {

const QuantTable& standard_luma_table() {
  static const QuantTable t = QuantTable::from_row_major({
      16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
      14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
      18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
      49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99});
  return t;
}

const QuantTable& standard_chroma_table() {
  static const QuantTable t = QuantTable::from_row_major({
      17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
      24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
      99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
      99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99});
  return t;
}

QuantTable scale_table(const QuantTable& t, int quality) {
  if (quality < 1 || quality > 100) {
    throw validation_error("quality must be in [1,100], got " + std::to_string(quality));
  }
  const int s = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> steps{};
  for (int pos = 0; pos < 64; ++pos) {
    steps[pos] = std::clamp((t.at_zigzag(pos) * s + 50) / 100, 1, 255);
  }
  return QuantTable(steps);
}

void CodecConfig::validate() const {
  if (quality < 1 || quality > 100) {
    throw validation_error("quality must be in [1,100], got " + std::to_string(quality));
  }
}

QuantTable CodecConfig::table_for_channel(int channel) const {
  if (table) return scale_table(*table, quality);
  const bool chroma = color_path == ColorPath::kYCbCr420 && channel > 0;
  return scale_table(chroma ? standard_chroma_table() : standard_luma_table(), quality);
}

CodecConfig standard_jpeg_config(int quality, ColorPath path) {
  CodecConfig cfg;
  cfg.color_path = path;
  cfg.quality = quality;
  return cfg;
}

Digest config_hash(const CodecConfig& cfg) {
  cfg.validate();
  std::ostringstream s;
  s << "dctguard-codec-1;path=" << to_string(cfg.color_path)
    << ";shift=" << (cfg.level_shift == LevelShift::kShift128 ? 1 : 0)
    << ";quality=" << cfg.quality << ";tables=" << (cfg.table ? "custom" : "standard");
  for (int c = 0; c < 3; ++c) {
    s << ";t" << c << "=";
    for (int step : cfg.table_for_channel(c).zigzag_steps()) s << step << ",";
  }
  return sha256(s.str());
}

namespace {

std::array<Plane, 3> color_planes(const ImageBuffer& img, ColorPath path) {
  if (path == ColorPath::kRgb) {
    return {channel_plane(img, 0), channel_plane(img, 1), channel_plane(img, 2)};
  }
  YCbCrPlanes ycc = rgb_to_ycbcr(img);
  return {std::move(ycc.y), subsample_420(ycc.cb), subsample_420(ycc.cr)};
}

std::array<std::pair<int, int>, 3> plane_dims(int w, int h, ColorPath path) {
  if (path == ColorPath::kRgb) return {{{w, h}, {w, h}, {w, h}}};
  const int cw = (w + 1) / 2;
  const int ch = (h + 1) / 2;
  return {{{w, h}, {cw, ch}, {cw, ch}}};
}

std::size_t block_count(std::pair<int, int> dims) {
  return static_cast<std::size_t>((dims.first + 7) / 8) * ((dims.second + 7) / 8);
}

ImageBuffer reconstruct(const CoefArchive& a, const CodecConfig& cfg) {
  const int w = static_cast<int>(a.width);
  const int h = static_cast<int>(a.height);
  const auto dims = plane_dims(w, h, a.color_path);
  std::array<Plane, 3> planes;
  for (int c = 0; c < 3; ++c) {
    const QuantTable table = cfg.table_for_channel(c);
    BlockGrid grid;
    grid.orig_width = dims[c].first;
    grid.orig_height = dims[c].second;
    grid.pad_right = (dims[c].first + 7) / 8 * 8 - dims[c].first;
    grid.pad_bottom = (dims[c].second + 7) / 8 * 8 - dims[c].second;
    const std::size_t n = block_count(dims[c]);
    grid.blocks.resize(n);
    for (std::size_t b = 0; b < n; ++b) {
      Levels levels{};
      for (int pos = 0; pos < 64; ++pos) {
        levels[kZigzagToBand[pos]] = a.levels[c][b * 64 + pos];
      }
      grid.blocks[b] = idct2(dequantize(levels, table), cfg.level_shift);
    }
    planes[c] = merge_blocks(grid);
  }
  if (a.color_path == ColorPath::kRgb) {
    return planes_to_image(planes[0], planes[1], planes[2]);
  }
  return ycbcr_to_rgb(planes[0], upsample_420(planes[1], w, h),
                      upsample_420(planes[2], w, h));
}

}  // namespace

CoefArchive encode(const ImageBuffer& img, const CodecConfig& cfg) {
  cfg.validate();
  CoefArchive a;
  a.width = static_cast<std::uint32_t>(img.width);
  a.height = static_cast<std::uint32_t>(img.height);
  a.color_path = cfg.color_path;
  a.quality = static_cast<std::uint8_t>(cfg.quality);
  a.config_hash = config_hash(cfg);
  const auto planes = color_planes(img, cfg.color_path);
  for (int c = 0; c < 3; ++c) {
    const QuantTable table = cfg.table_for_channel(c);
    const BlockGrid grid = split_blocks(planes[c]);
    auto& out = a.levels[c];
    out.resize(grid.blocks.size() * 64);
    for (std::size_t b = 0; b < grid.blocks.size(); ++b) {
      const Levels levels = quantize(dct2(grid.blocks[b], cfg.level_shift), table);
      for (int pos = 0; pos < 64; ++pos) out[b * 64 + pos] = levels[kZigzagToBand[pos]];
    }
  }
  return a;
}

ImageBuffer decode(const CoefArchive& archive, const CodecConfig& cfg) {
  if (archive.color_path != cfg.color_path || archive.quality != cfg.quality ||
      archive.config_hash != config_hash(cfg)) {
    throw validation_error("archive was encoded with a different codec configuration");
  }
  const auto dims = plane_dims(static_cast<int>(archive.width),
                               static_cast<int>(archive.height), archive.color_path);
  for (int c = 0; c < 3; ++c) {
    if (archive.levels[c].size() != block_count(dims[c]) * 64) {
      throw validation_error("archive plane " + std::to_string(c) +
                             " has the wrong number of levels");
    }
  }
  return reconstruct(archive, cfg);
}

ImageBuffer defend(const ImageBuffer& img, const CodecConfig& cfg) {
  return reconstruct(encode(img, cfg), cfg);
}

std::vector<unsigned char> serialize(const CoefArchive& a) {
  std::vector<unsigned char> out(a.kMagic.begin(), a.kMagic.end());
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
  };
  put32(a.width);
  put32(a.height);
  out.push_back(a.color_path == ColorPath::kRgb ? 0 : 1);
  out.push_back(a.quality);
  out.insert(out.end(), a.config_hash.begin(), a.config_hash.end());
  for (const auto& plane : a.levels) {
    for (std::int16_t l : plane) {
      const auto u = static_cast<std::uint16_t>(l);
      out.push_back(static_cast<unsigned char>(u & 0xff));
      out.push_back(static_cast<unsigned char>(u >> 8));
    }
  }
  return out;
}

CoefArchive parse_archive(const std::vector<unsigned char>& bytes) {
  constexpr std::size_t kHeader = 4 + 4 + 4 + 1 + 1 + 32;
  if (bytes.size() < kHeader ||
      !std::equal(CoefArchive::kMagic.begin(), CoefArchive::kMagic.end(), bytes.begin())) {
    throw validation_error("not a DSH1 coefficient archive");
  }
  auto get32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[off + i]) << (8 * i);
    return v;
  };
  CoefArchive a;
  a.width = get32(4);
  a.height = get32(8);
  if (a.width == 0 || a.height == 0 || a.width > (1u << 16) || a.height > (1u << 16)) {
    throw validation_error("archive header: implausible dimensions");
  }
  if (bytes[12] > 1) throw validation_error("archive header: unknown color path");
  a.color_path = bytes[12] == 0 ? ColorPath::kRgb : ColorPath::kYCbCr420;
  a.quality = bytes[13];
  if (a.quality < 1 || a.quality > 100) {
    throw validation_error("archive header: quality out of range");
  }
  std::copy(bytes.begin() + 14, bytes.begin() + 46, a.config_hash.begin());
  const auto dims = plane_dims(static_cast<int>(a.width), static_cast<int>(a.height),
                               a.color_path);
  std::size_t expected = kHeader;
  for (const auto& d : dims) expected += block_count(d) * 64 * 2;
  if (bytes.size() != expected) {
    throw validation_error("archive payload is " + std::to_string(bytes.size()) +
                           " bytes, expected " + std::to_string(expected));
  }
  std::size_t off = kHeader;
  for (int c = 0; c < 3; ++c) {
    a.levels[c].resize(block_count(dims[c]) * 64);
    for (auto& l : a.levels[c]) {
      l = static_cast<std::int16_t>(static_cast<std::uint16_t>(bytes[off] | (bytes[off + 1] << 8)));
      off += 2;
    }
  }
  return a;
}

void write_archive(const std::filesystem::path& path, const CoefArchive& archive) {
  write_file(path, serialize(archive));
}

CoefArchive read_archive(const std::filesystem::path& path) {
  return parse_archive(read_file(path));
}

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width != b.width || a.height != b.height) {
    throw validation_error("psnr: image dimensions differ");
  }
  double se = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    se += d * d;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = se / static_cast<double>(a.data.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double perturbation_suppression(const ImageBuffer& clean, const ImageBuffer& adv,
                                const ImageBuffer& defended_clean,
                                const ImageBuffer& defended_adv) {
  double injected = 0.0;
  double surviving = 0.0;
  for (std::size_t i = 0; i < clean.data.size(); ++i) {
    const double d = static_cast<double>(adv.data[i]) - clean.data[i];
    const double e = static_cast<double>(defended_adv.data[i]) - defended_clean.data[i];
    injected += d * d;
    surviving += e * e;
  }
  if (injected == 0.0) return 1.0;
  return std::max(0.0, 1.0 - surviving / injected);
}

}  // namespace dctguard
