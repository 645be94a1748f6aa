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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dctguard {

// One classifier's softmax output.
struct ConfidenceVector {
  std::string model_id;
  std::vector<double> scores;

  // Scores must be non-negative and sum to 1 within 1e-6.
  void validate() const;
};

enum class VoteRule { kAverageConfidence, kMajority };

std::string_view to_string(VoteRule rule);
VoteRule parse_vote_rule(std::string_view text);

struct EnsembleDecision {
  int label = -1;
  double mean_score = 0.0;  // mean confidence of the winning label
  std::vector<int> votes;   // per-model argmax, input order
  VoteRule rule = VoteRule::kAverageConfidence;
};

// argmax of the element-wise mean; ties go to the lowest label.
EnsembleDecision average_confidence(std::span<const ConfidenceVector> vectors);

// Mode of the per-model argmaxes; ties go to the higher mean confidence,
// then the lowest label.
EnsembleDecision majority_vote(std::span<const ConfidenceVector> vectors);

EnsembleDecision decide(std::span<const ConfidenceVector> vectors, VoteRule rule);

// Joins per-model JSON-lines score files ({"image": name, "scores": [...]})
// on image name. Model ids are the file stems. Returns one JSON object per
// image in name order; images missing from any model are reported as
// {"image", "status": "incomplete", "missing": [...]}.
std::vector<nlohmann::json> vote_files(std::span<const std::filesystem::path> files,
                                       VoteRule rule);

}  // namespace dctguard
