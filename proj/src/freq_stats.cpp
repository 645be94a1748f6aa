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

#include "dctguard/freq_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dctguard/error.hpp"
#include "dctguard/parallel.hpp"

namespace dctguard {

std::string_view to_string(ChannelTag tag) {
  switch (tag) {
    case ChannelTag::kR: return "R";
    case ChannelTag::kG: return "G";
    case ChannelTag::kB: return "B";
    case ChannelTag::kY: return "Y";
    case ChannelTag::kCb: return "Cb";
    case ChannelTag::kCr: return "Cr";
  }
  return "?";
}

ChannelTag parse_channel(std::string_view text) {
  for (ChannelTag tag : kAllChannels) {
    if (to_string(tag) == text) return tag;
  }
  throw usage_error("unknown channel '" + std::string(text) +
                    "' (expected R, G, B, Y, Cb or Cr)");
}

namespace {

// Unrounded 2x2 box average with edge replication.
Plane box_average_420(const Plane& plane) {
  const int ow = (plane.width + 1) / 2;
  const int oh = (plane.height + 1) / 2;
  Plane out(ow, oh);
  auto sample = [&](int x, int y) {
    return plane.at(std::min(x, plane.width - 1), std::min(y, plane.height - 1));
  };
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      out.at(x, y) = (sample(2 * x, 2 * y) + sample(2 * x + 1, 2 * y) +
                      sample(2 * x, 2 * y + 1) + sample(2 * x + 1, 2 * y + 1)) /
                     4.0;
    }
  }
  return out;
}

using BandSums = std::array<double, 64>;

struct Partial {
  BandSums sum{};
  std::int64_t blocks = 0;
};

template <typename PlaneFn>
BandStats accumulate(std::size_t n_items, ChannelTag tag, LevelShift shift,
                     int jobs, PlaneFn&& plane_of) {
  // Pass 1: per-item sums, reduced in item order.
  std::vector<Partial> first(n_items);
  parallel_for(n_items, jobs, [&](std::size_t i) {
    const BlockGrid grid = split_blocks(plane_of(i));
    for (const auto& block : grid.blocks) {
      const CoefBlock c = dct2(block, shift);
      for (int b = 0; b < 64; ++b) first[i].sum[b] += c[b];
    }
    first[i].blocks = static_cast<std::int64_t>(grid.blocks.size());
  });
  BandSums mean{};
  std::int64_t total = 0;
  for (const auto& p : first) {
    for (int b = 0; b < 64; ++b) mean[b] += p.sum[b];
    total += p.blocks;
  }
  if (total < 2) {
    throw validation_error("band statistics need at least 2 blocks, corpus has " +
                           std::to_string(total));
  }
  for (double& m : mean) m /= static_cast<double>(total);

  // Pass 2: squared deviations from the corpus mean.
  std::vector<BandSums> second(n_items);
  parallel_for(n_items, jobs, [&](std::size_t i) {
    const BlockGrid grid = split_blocks(plane_of(i));
    BandSums& acc = second[i];
    acc.fill(0.0);
    for (const auto& block : grid.blocks) {
      const CoefBlock c = dct2(block, shift);
      for (int b = 0; b < 64; ++b) {
        const double d = c[b] - mean[b];
        acc[b] += d * d;
      }
    }
  });
  BandStats stats;
  stats.channel = tag;
  stats.n_blocks = total;
  BandSums ss{};
  for (const auto& p : second) {
    for (int b = 0; b < 64; ++b) ss[b] += p[b];
  }
  for (int b = 0; b < 64; ++b) {
    stats.delta[b] = std::sqrt(ss[b] / static_cast<double>(total - 1));
  }
  return stats;
}

}  // namespace

Plane channel_path_plane(const ImageBuffer& img, ChannelTag tag) {
  switch (tag) {
    case ChannelTag::kR: return channel_plane(img, 0);
    case ChannelTag::kG: return channel_plane(img, 1);
    case ChannelTag::kB: return channel_plane(img, 2);
    case ChannelTag::kY: return rgb_to_ycbcr(img).y;
    case ChannelTag::kCb: return subsample_420(rgb_to_ycbcr(img).cb);
    case ChannelTag::kCr: return subsample_420(rgb_to_ycbcr(img).cr);
  }
  throw validation_error("bad channel tag");
}

Plane residual_channel_plane(const std::array<Plane, 3>& rgb, ChannelTag tag) {
  const Plane& r = rgb[0];
  const Plane& g = rgb[1];
  const Plane& b = rgb[2];
  auto mix = [&](double kr, double kg, double kb) {
    Plane out(r.width, r.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
      out.data[i] = kr * r.data[i] + kg * g.data[i] + kb * b.data[i];
    }
    return out;
  };
  switch (tag) {
    case ChannelTag::kR: return r;
    case ChannelTag::kG: return g;
    case ChannelTag::kB: return b;
    case ChannelTag::kY: return mix(0.299, 0.587, 0.114);
    case ChannelTag::kCb: return box_average_420(mix(-0.168736, -0.331264, 0.5));
    case ChannelTag::kCr: return box_average_420(mix(0.5, -0.418688, -0.081312));
  }
  throw validation_error("bad channel tag");
}

Plane residual_channel_plane(const ImageBuffer& original,
                             const ImageBuffer& perturbed, ChannelTag tag) {
  if (original.width != perturbed.width || original.height != perturbed.height) {
    throw validation_error("residual: image dimensions differ");
  }
  std::array<Plane, 3> rgb;
  for (int c = 0; c < 3; ++c) {
    rgb[c] = Plane(original.width, original.height);
    for (std::size_t i = 0; i < rgb[c].data.size(); ++i) {
      rgb[c].data[i] = static_cast<double>(perturbed.data[3 * i + c]) -
                       static_cast<double>(original.data[3 * i + c]);
    }
  }
  return residual_channel_plane(rgb, tag);
}

BandStats estimate_band_stats(std::span<const ImageBuffer> corpus, ChannelTag tag,
                              int jobs) {
  return accumulate(corpus.size(), tag, LevelShift::kShift128, jobs,
                    [&](std::size_t i) { return channel_path_plane(corpus[i], tag); });
}

BandStats estimate_band_stats(std::span<const Plane> planes, ChannelTag tag,
                              int jobs) {
  return accumulate(planes.size(), tag, LevelShift::kNone, jobs,
                    [&](std::size_t i) -> const Plane& { return planes[i]; });
}

namespace {

BandRatio ratio_from_deltas(const std::array<double, 64>& adv,
                            const std::array<double, 64>& ben) {
  BandRatio out;
  for (int b = 0; b < 64; ++b) {
    out.ratio[b] = std::max(adv[b], kRatioFloor) / std::max(ben[b], kRatioFloor);
  }
  std::iota(out.order.begin(), out.order.end(), 0);
  std::sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    if (out.ratio[a] != out.ratio[b]) return out.ratio[a] < out.ratio[b];
    return kBandToZigzag[a] < kBandToZigzag[b];
  });
  return out;
}

}  // namespace

BandRatio band_ratio(const BandStats& adv, const BandStats& ben) {
  if (adv.channel != ben.channel) {
    throw validation_error("band_ratio: channel mismatch (" +
                           std::string(to_string(adv.channel)) + " vs " +
                           std::string(to_string(ben.channel)) + ")");
  }
  return ratio_from_deltas(adv.delta, ben.delta);
}

BandRatio merge_rgb_ratio(std::span<const StatsPair> pairs) {
  if (pairs.size() != 3) {
    throw validation_error("merge_rgb_ratio: expected R, G and B stat pairs");
  }
  bool seen[3] = {false, false, false};
  std::array<double, 64> adv{};
  std::array<double, 64> ben{};
  for (const auto& p : pairs) {
    if (p.adv.channel != p.ben.channel) {
      throw validation_error("merge_rgb_ratio: pair mixes channels");
    }
    const int idx = static_cast<int>(p.adv.channel);
    if (idx > 2 || seen[idx]) {
      throw validation_error("merge_rgb_ratio: channel tags must be exactly {R,G,B}");
    }
    seen[idx] = true;
    for (int b = 0; b < 64; ++b) {
      adv[b] += p.adv.delta[b] / 3.0;
      ben[b] += p.ben.delta[b] / 3.0;
    }
  }
  return ratio_from_deltas(adv, ben);
}

nlohmann::json to_json(const BandStats& stats) {
  return {{"channel", to_string(stats.channel)},
          {"n_blocks", stats.n_blocks},
          {"delta", stats.delta}};
}

BandStats band_stats_from_json(const nlohmann::json& j) {
  try {
    BandStats s;
    s.channel = parse_channel(j.at("channel").get<std::string>());
    s.n_blocks = j.at("n_blocks").get<std::int64_t>();
    const auto& d = j.at("delta");
    if (!d.is_array() || d.size() != 64) {
      throw validation_error("stats: \"delta\" must hold 64 numbers");
    }
    for (int b = 0; b < 64; ++b) s.delta[b] = d[b].get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("stats: ") + e.what());
  }
}

nlohmann::json stats_file_json(std::span<const BandStats> stats) {
  nlohmann::json channels = nlohmann::json::array();
  for (const auto& s : stats) channels.push_back(to_json(s));
  return {{"format", 1}, {"channels", channels}};
}

std::vector<BandStats> stats_from_file_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", 0) != 1 || !j.contains("channels")) {
    throw validation_error("stats file: missing or unsupported \"format\"");
  }
  std::vector<BandStats> out;
  for (const auto& c : j.at("channels")) out.push_back(band_stats_from_json(c));
  return out;
}

nlohmann::json to_json(const BandRatio& ratio) {
  return {{"format", 1}, {"ratio", ratio.ratio}, {"order", ratio.order}};
}

BandRatio band_ratio_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", 0) != 1) {
      throw validation_error("ratio: missing or unsupported \"format\"");
    }
    BandRatio r;
    const auto& ratio = j.at("ratio");
    const auto& order = j.at("order");
    if (ratio.size() != 64 || order.size() != 64) {
      throw validation_error("ratio: \"ratio\" and \"order\" must hold 64 entries");
    }
    std::array<bool, 64> seen{};
    for (int b = 0; b < 64; ++b) {
      r.ratio[b] = ratio[b].get<double>();
      r.order[b] = order[b].get<int>();
      if (r.order[b] < 0 || r.order[b] > 63 || seen[r.order[b]]) {
        throw validation_error("ratio: \"order\" is not a permutation of 0..63");
      }
      seen[r.order[b]] = true;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("ratio: ") + e.what());
  }
}

BandRatio corpus_rgb_ratio(std::span<const ImageBuffer> benign,
                           std::span<const ImageBuffer> adv, int jobs) {
  if (benign.size() != adv.size()) {
    throw validation_error("residual statistics need one perturbed image per benign image");
  }
  std::vector<StatsPair> pairs;
  for (ChannelTag tag : {ChannelTag::kR, ChannelTag::kG, ChannelTag::kB}) {
    std::vector<Plane> residuals(benign.size());
    for (std::size_t i = 0; i < benign.size(); ++i) {
      residuals[i] = residual_channel_plane(benign[i], adv[i], tag);
    }
    pairs.push_back({estimate_band_stats(std::span<const Plane>(residuals), tag, jobs),
                     estimate_band_stats(benign, tag, jobs)});
  }
  return merge_rgb_ratio(pairs);
}

}  // namespace dctguard
