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
#include <span>
#include <string_view>
#include <vector>

#include "dctguard/image.hpp"
#include "dctguard/transform.hpp"
#include "json.hpp"

namespace dctguard {

enum class ChannelTag { kR, kG, kB, kY, kCb, kCr };

inline constexpr std::array<ChannelTag, 6> kAllChannels = {
    ChannelTag::kR, ChannelTag::kG,  ChannelTag::kB,
    ChannelTag::kY, ChannelTag::kCb, ChannelTag::kCr};

std::string_view to_string(ChannelTag tag);
ChannelTag parse_channel(std::string_view text);

// The plane a channel contributes after its colour path: R/G/B as-is, Y at
// full resolution, Cb/Cr converted and then 4:2:0 subsampled.
Plane channel_path_plane(const ImageBuffer& img, ChannelTag tag);

// Residual x_adv - x expressed in the channel's domain. The colour transform
// is applied without offset or clamping, and chroma is box-averaged without
// rounding so small perturbations survive.
Plane residual_channel_plane(const ImageBuffer& original,
                             const ImageBuffer& perturbed, ChannelTag tag);
Plane residual_channel_plane(const std::array<Plane, 3>& rgb_residual,
                             ChannelTag tag);

// Per-band sample standard deviation (n-1), row-major band index.
struct BandStats {
  ChannelTag channel = ChannelTag::kR;
  std::array<double, 64> delta{};
  std::int64_t n_blocks = 0;
};

// Benign statistics over a corpus of images (level shift applied; it only
// moves the DC mean).
BandStats estimate_band_stats(std::span<const ImageBuffer> corpus,
                              ChannelTag tag, int jobs = 1);

// Statistics over planes that already live in the channel's domain, such as
// perturbation residuals.
BandStats estimate_band_stats(std::span<const Plane> planes, ChannelTag tag,
                              int jobs = 1);

inline constexpr double kRatioFloor = 1e-6;

struct BandRatio {
  std::array<double, 64> ratio{};
  std::array<int, 64> order{};  // band indices by ascending ratio
};

// delta_adv / delta_benign per band; ties in the ordering fall back to zigzag
// position.
BandRatio band_ratio(const BandStats& adv, const BandStats& ben);

struct StatsPair {
  BandStats adv;
  BandStats ben;
};

// One shared ordering for R, G and B: deltas are averaged over the three
// channels before the ratio is taken.
BandRatio merge_rgb_ratio(std::span<const StatsPair> pairs);

// Merged RGB ratio of residual (adv - benign) statistics over benign
// statistics; adv[i] must be the perturbed copy of benign[i].
BandRatio corpus_rgb_ratio(std::span<const ImageBuffer> benign,
                           std::span<const ImageBuffer> adv, int jobs = 1);

nlohmann::json to_json(const BandStats& stats);
BandStats band_stats_from_json(const nlohmann::json& j);
nlohmann::json stats_file_json(std::span<const BandStats> stats);
std::vector<BandStats> stats_from_file_json(const nlohmann::json& j);

nlohmann::json to_json(const BandRatio& ratio);
BandRatio band_ratio_from_json(const nlohmann::json& j);

}  // namespace dctguard
