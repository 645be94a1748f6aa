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

#include "dctguard/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dctguard/error.hpp"
#include "dctguard/hash.hpp"
#include "dctguard/image_io.hpp"
#include "dctguard/transform.hpp"

namespace dctguard {

std::string_view to_string(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::kSign: return "sign";
    case PerturbKind::kGaussian: return "gaussian";
    case PerturbKind::kUniform: return "uniform";
  }
  return "?";
}

PerturbKind parse_perturb_kind(std::string_view text) {
  if (text == "sign") return PerturbKind::kSign;
  if (text == "gaussian") return PerturbKind::kGaussian;
  if (text == "uniform") return PerturbKind::kUniform;
  throw usage_error("unknown perturbation kind '" + std::string(text) + "'");
}

void PerturbSpec::validate() const {
  if (!(eps >= 0.0 && eps <= 0.125)) {
    throw validation_error("eps must lie in [0, 0.125], got " + std::to_string(eps));
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw validation_error("sigma must be >= 0, got " + std::to_string(sigma));
  }
}

int PerturbSpec::amplitude() const {
  return static_cast<int>(round_half_away(eps * 255.0));
}

namespace {

class NoiseSource {
 public:
  NoiseSource(const PerturbSpec& spec, std::uint64_t stream)
      : spec_(spec),
        rng_(stream),
        amplitude_(spec.amplitude()),
        uniform_(-spec.eps * 255.0, spec.eps * 255.0),
        normal_(0.0, spec.sigma) {}

  double next() {
    switch (spec_.kind) {
      case PerturbKind::kSign:
        return (rng_() & 1) ? amplitude_ : -amplitude_;
      case PerturbKind::kUniform:
        return round_half_away(uniform_(rng_));
      case PerturbKind::kGaussian:
        return spec_.sigma == 0.0 ? 0.0 : round_half_away(normal_(rng_));
    }
    return 0.0;
  }

 private:
  const PerturbSpec& spec_;
  std::mt19937_64 rng_;
  int amplitude_;
  std::uniform_real_distribution<double> uniform_;
  std::normal_distribution<double> normal_;
};

}  // namespace

PerturbResult apply_perturbation(const ImageBuffer& img, const PerturbSpec& spec,
                                 std::uint64_t image_index) {
  spec.validate();
  PerturbResult out;
  out.image = img;
  for (int c = 0; c < 3; ++c) {
    out.residual[c] = Plane(img.width, img.height);
    out.raw_residual[c] = Plane(img.width, img.height);
    NoiseSource noise(spec, mix_seed(spec.seed, image_index, c));
    for (std::size_t i = 0; i < out.residual[c].data.size(); ++i) {
      const double original = img.data[3 * i + c];
      const double n = noise.next();
      const std::uint8_t v = to_sample(original + n);
      out.image.data[3 * i + c] = v;
      out.raw_residual[c].data[i] = n;
      out.residual[c].data[i] = static_cast<double>(v) - original;
    }
  }
  return out;
}

void write_residual(const std::filesystem::path& path,
                    const std::array<Plane, 3>& residual) {
  const int w = residual[0].width;
  const int h = residual[0].height;
  std::vector<unsigned char> bytes = {'D', 'S', 'R', '1'};
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<unsigned char>(v >> (8 * i)));
  };
  put32(static_cast<std::uint32_t>(w));
  put32(static_cast<std::uint32_t>(h));
  for (std::size_t i = 0; i < residual[0].data.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const double r = std::clamp(round_half_away(residual[c].data[i]), -32768.0, 32767.0);
      const auto v = static_cast<std::uint16_t>(static_cast<std::int16_t>(r));
      bytes.push_back(static_cast<unsigned char>(v & 0xff));
      bytes.push_back(static_cast<unsigned char>(v >> 8));
    }
  }
  write_file(path, bytes);
}

std::array<Plane, 3> read_residual(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() < 12 || bytes[0] != 'D' || bytes[1] != 'S' || bytes[2] != 'R' ||
      bytes[3] != '1') {
    throw validation_error("not a residual map: " + path.string());
  }
  auto get32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[off + i]) << (8 * i);
    return v;
  };
  const std::uint32_t w = get32(4);
  const std::uint32_t h = get32(8);
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16) ||
      bytes.size() != 12 + static_cast<std::size_t>(w) * h * 6) {
    throw validation_error("residual map has inconsistent size: " + path.string());
  }
  std::array<Plane, 3> out;
  for (auto& p : out) p = Plane(static_cast<int>(w), static_cast<int>(h));
  std::size_t off = 12;
  for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i) {
    for (int c = 0; c < 3; ++c) {
      const auto v = static_cast<std::uint16_t>(bytes[off] | (bytes[off + 1] << 8));
      out[c].data[i] = static_cast<std::int16_t>(v);
      off += 2;
    }
  }
  return out;
}

double check_dct_bound(const PixelBlock& residual, double eps) {
  const double bound = 8.0 * 255.0 * eps;
  const CoefBlock c = dct2(residual, LevelShift::kNone);
  double worst = 0.0;
  for (int b = 0; b < 64; ++b) {
    const double a = std::abs(c[b]);
    // Slack covers floating-point error of the transform only.
    if (a > bound + 1e-9) {
      throw validation_error("DCT bound violated in band (" + std::to_string(b / 8) +
                             "," + std::to_string(b % 8) + "): |C| = " +
                             std::to_string(a) + " > " + std::to_string(bound));
    }
    worst = std::max(worst, a);
  }
  return worst;
}

DctBoundReport verify_dct_bound(const PerturbSpec& spec, std::uint64_t trials) {
  spec.validate();
  if (spec.kind == PerturbKind::kGaussian) {
    throw validation_error("DCT bound applies to sign and uniform perturbations only");
  }
  DctBoundReport report;
  report.bound = 8.0 * 255.0 * spec.eps;
  report.trials = trials;
  NoiseSource noise(spec, mix_seed(spec.seed, 0xdc7b0c4dULL));
  const double bound = report.bound;
  for (std::uint64_t t = 0; t < trials; ++t) {
    PixelBlock block;
    for (double& v : block) v = noise.next();
    const CoefBlock c = dct2(block, LevelShift::kNone);
    for (int b = 0; b < 64; ++b) {
      const double a = std::abs(c[b]);
      if (a > bound + 1e-9) {
        throw validation_error("DCT bound violated in band (" + std::to_string(b / 8) +
                               "," + std::to_string(b % 8) + ") on residual block " +
                               std::to_string(t) + ": |C| = " + std::to_string(a) +
                               " > " + std::to_string(bound));
      }
      report.max_abs[b] = std::max(report.max_abs[b], a);
    }
  }
  for (double a : report.max_abs) report.max_overall = std::max(report.max_overall, a);
  return report;
}

}  // namespace dctguard
