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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dctguard/hash.hpp"
#include "dctguard/image.hpp"
#include "dctguard/quant.hpp"
#include "dctguard/transform.hpp"

namespace dctguard {

// JPEG Annex K example tables.
const QuantTable& standard_luma_table();
const QuantTable& standard_chroma_table();

// IJG quality scaling. Quality 50 is the identity; 100 collapses to all ones.
QuantTable scale_table(const QuantTable& t, int quality);

struct CodecConfig {
  ColorPath color_path = ColorPath::kRgb;
  // nullopt selects the standard JPEG tables (luma for Y, chroma for Cb/Cr;
  // luma for all three channels on the RGB path).
  std::optional<QuantTable> table;
  int quality = 50;
  LevelShift level_shift = LevelShift::kShift128;

  void validate() const;
  // Quality-scaled table applied to plane `channel` (0..2).
  QuantTable table_for_channel(int channel) const;
};

CodecConfig standard_jpeg_config(int quality, ColorPath path = ColorPath::kYCbCr420);

// SHA-256 over a canonical description of the effective tables and flags.
Digest config_hash(const CodecConfig& cfg);

// Round trip through the block quantizer. Output has the input's size.
ImageBuffer defend(const ImageBuffer& img, const CodecConfig& cfg);

struct CoefArchive {
  static constexpr std::array<char, 4> kMagic = {'D', 'S', 'H', '1'};

  std::uint32_t width = 0;
  std::uint32_t height = 0;
  ColorPath color_path = ColorPath::kRgb;
  std::uint8_t quality = 50;
  Digest config_hash{};
  // Per plane: blocks in raster order, each 64 levels in zigzag order.
  std::array<std::vector<std::int16_t>, 3> levels;

  bool operator==(const CoefArchive&) const = default;
};

CoefArchive encode(const ImageBuffer& img, const CodecConfig& cfg);
// The archive does not carry the tables; `cfg` must hash to the stored value.
ImageBuffer decode(const CoefArchive& archive, const CodecConfig& cfg);

std::vector<unsigned char> serialize(const CoefArchive& archive);
// Structural checks only (magic, header fields, payload length).
CoefArchive parse_archive(const std::vector<unsigned char>& bytes);
void write_archive(const std::filesystem::path& path, const CoefArchive& archive);
CoefArchive read_archive(const std::filesystem::path& path);

// Infinite for identical images.
double psnr(const ImageBuffer& a, const ImageBuffer& b);
inline constexpr double kPsnrCap = 100.0;

// 1 - ||D(x_adv) - D(x)||^2 / ||x_adv - x||^2, floored at 0; 1 when the
// perturbation is empty.
double perturbation_suppression(const ImageBuffer& clean, const ImageBuffer& adv,
                                const ImageBuffer& defended_clean,
                                const ImageBuffer& defended_adv);

}  // namespace dctguard
