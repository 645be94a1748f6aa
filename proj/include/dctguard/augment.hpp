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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dctguard/codec.hpp"
#include "dctguard/image_io.hpp"
#include "dctguard/perturb.hpp"
#include "json.hpp"

namespace dctguard {

// Noisy-training recipe: the mixed loss xi * J(x) + (1 - xi) * J(x_q), where
// x_q is x compressed at quality q plus Gaussian noise. Models are
// fine-tuned in chain order, each starting from its predecessor.
struct AugmentParams {
  double xi = 0.9;
  std::vector<int> qualities = {90, 80, 70, 60, 50, 40, 30};
  double sigma = kDefaultSigma;
  std::uint64_t seed = kDefaultSeed;
  double learning_rate = 0.005;
  double decay = 0.94;
  int epochs = 14;
  std::vector<std::string> ensemble = {"M", "M90", "M70", "M50", "M30"};
};

struct ExportedFile {
  std::string name;
  std::string sha256;
};

struct QualityEntry {
  int quality = 0;
  std::string dir;  // relative to the dataset root
  std::vector<ExportedFile> files;
};

struct AugmentManifest {
  AugmentParams params;
  CodecConfig codec;
  std::vector<QualityEntry> entries;
  std::size_t n_images = 0;
  std::string dataset_sha256;
};

std::string quality_dir(int quality);

// Writes <out>/q{quality}/<stem>.png for every image and quality, then
// <out>/manifest.json.
AugmentManifest export_augment(std::span<const NamedImage> corpus,
                               const CodecConfig& cfg, const AugmentParams& params,
                               const std::filesystem::path& out_dir, int jobs = 1);

nlohmann::json to_json(const AugmentManifest& manifest);

struct ManifestIssue {
  std::string path;  // JSON pointer of the offending field
  std::string message;
};

struct ManifestReport {
  std::vector<ManifestIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks field ranges, chain consistency and that every listed file exists
// under `root` with the recorded hash.
ManifestReport validate_manifest(const nlohmann::json& manifest,
                                 const std::filesystem::path& root);

}  // namespace dctguard
