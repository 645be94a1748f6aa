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
#include <string_view>

#include "dctguard/image.hpp"

namespace dctguard {

inline constexpr std::uint64_t kDefaultSeed = 20201018;

// Default Gaussian std for noisy-training augmentation, in sample units.
// Not pinned down by any published recipe; override with --sigma.
inline constexpr double kDefaultSigma = 0.03 * 255.0;

enum class PerturbKind { kSign, kGaussian, kUniform };

std::string_view to_string(PerturbKind kind);
PerturbKind parse_perturb_kind(std::string_view text);

struct PerturbSpec {
  PerturbKind kind = PerturbKind::kSign;
  double eps = 0.004;  // L-inf bound as a fraction of 255
  double sigma = kDefaultSigma;
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
  // round(eps * 255): the integer amplitude actually injected.
  int amplitude() const;
};

struct PerturbResult {
  ImageBuffer image;
  std::array<Plane, 3> residual;      // after clamping: image - original
  std::array<Plane, 3> raw_residual;  // injected noise before clamping
};

// Deterministic in (spec.seed, image_index, channel).
PerturbResult apply_perturbation(const ImageBuffer& img, const PerturbSpec& spec,
                                 std::uint64_t image_index = 0);

// Signed 16-bit residual maps: "DSR1", u32 width, u32 height, then int16
// samples interleaved R,G,B, all little-endian.
void write_residual(const std::filesystem::path& path,
                    const std::array<Plane, 3>& residual);
std::array<Plane, 3> read_residual(const std::filesystem::path& path);

struct DctBoundReport {
  std::array<double, 64> max_abs{};  // per band, row-major
  double max_overall = 0.0;
  double bound = 0.0;  // 8 * 255 * eps
  std::uint64_t trials = 0;
};

// Largest |DCT(residual)| over the block; throws a validation error naming
// the band if it exceeds 8 * 255 * eps.
double check_dct_bound(const PixelBlock& residual, double eps);

// Monte Carlo over random residual blocks of a sign or uniform spec.
DctBoundReport verify_dct_bound(const PerturbSpec& spec, std::uint64_t trials);

}  // namespace dctguard
