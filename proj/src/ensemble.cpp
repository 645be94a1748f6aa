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

#include "dctguard/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "dctguard/error.hpp"

namespace fs = std::filesystem;

namespace dctguard {

void ConfidenceVector::validate() const {
  if (scores.empty()) throw validation_error("model " + model_id + ": empty score vector");
  double sum = 0.0;
  for (double s : scores) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw validation_error("model " + model_id + ": scores must be finite and >= 0");
    }
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw validation_error("model " + model_id + ": scores sum to " +
                           std::to_string(sum) + ", not 1");
  }
}

std::string_view to_string(VoteRule rule) {
  return rule == VoteRule::kAverageConfidence ? "average" : "majority";
}

VoteRule parse_vote_rule(std::string_view text) {
  if (text == "average") return VoteRule::kAverageConfidence;
  if (text == "majority") return VoteRule::kMajority;
  throw usage_error("unknown vote rule '" + std::string(text) + "'");
}

namespace {

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Per-label mean, summed in sorted order so the result does not depend on
// the order of the models.
std::vector<double> mean_scores(std::span<const ConfidenceVector> vectors) {
  if (vectors.empty()) throw validation_error("ensemble needs at least one model");
  const std::size_t labels = vectors.front().scores.size();
  for (const auto& v : vectors) {
    v.validate();
    if (v.scores.size() != labels) {
      throw validation_error("model " + v.model_id + " has " +
                             std::to_string(v.scores.size()) + " labels, expected " +
                             std::to_string(labels));
    }
  }
  std::vector<double> mean(labels);
  std::vector<double> column(vectors.size());
  for (std::size_t l = 0; l < labels; ++l) {
    for (std::size_t m = 0; m < vectors.size(); ++m) column[m] = vectors[m].scores[l];
    std::sort(column.begin(), column.end());
    double s = 0.0;
    for (double c : column) s += c;
    mean[l] = s / static_cast<double>(vectors.size());
  }
  return mean;
}

std::vector<int> votes_of(std::span<const ConfidenceVector> vectors) {
  std::vector<int> votes;
  votes.reserve(vectors.size());
  for (const auto& v : vectors) votes.push_back(argmax(v.scores));
  return votes;
}

}  // namespace

EnsembleDecision average_confidence(std::span<const ConfidenceVector> vectors) {
  const auto mean = mean_scores(vectors);
  EnsembleDecision d;
  d.rule = VoteRule::kAverageConfidence;
  d.label = argmax(mean);
  d.mean_score = mean[d.label];
  d.votes = votes_of(vectors);
  return d;
}

EnsembleDecision majority_vote(std::span<const ConfidenceVector> vectors) {
  const auto mean = mean_scores(vectors);
  EnsembleDecision d;
  d.rule = VoteRule::kMajority;
  d.votes = votes_of(vectors);
  std::map<int, int> counts;
  for (int v : d.votes) ++counts[v];
  int best = -1;
  int best_count = 0;
  for (const auto& [label, count] : counts) {
    // Map iteration is ascending, so strict comparisons keep the lowest label.
    if (count > best_count || (count == best_count && mean[label] > mean[best])) {
      best = label;
      best_count = count;
    }
  }
  d.label = best;
  d.mean_score = mean[best];
  return d;
}

EnsembleDecision decide(std::span<const ConfidenceVector> vectors, VoteRule rule) {
  return rule == VoteRule::kMajority ? majority_vote(vectors) : average_confidence(vectors);
}

std::vector<nlohmann::json> vote_files(std::span<const fs::path> files, VoteRule rule) {
  if (files.empty()) throw usage_error("vote needs at least one score file");
  std::vector<std::string> models;
  std::vector<std::map<std::string, std::vector<double>>> tables;
  std::set<std::string> images;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    models.push_back(path.stem().string());
    auto& table = tables.emplace_back();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        const auto image = j.at("image").get<std::string>();
        if (!table.emplace(image, j.at("scores").get<std::vector<double>>()).second) {
          throw validation_error("duplicate image " + image);
        }
        images.insert(image);
      } catch (const nlohmann::json::exception& e) {
        throw validation_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      } catch (const Error& e) {
        throw validation_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  std::vector<nlohmann::json> out;
  for (const auto& image : images) {
    std::vector<ConfidenceVector> vectors;
    std::vector<std::string> missing;
    for (std::size_t m = 0; m < models.size(); ++m) {
      auto it = tables[m].find(image);
      if (it == tables[m].end()) {
        missing.push_back(models[m]);
      } else {
        vectors.push_back({models[m], it->second});
      }
    }
    if (!missing.empty()) {
      out.push_back({{"image", image}, {"status", "incomplete"}, {"missing", missing}});
      continue;
    }
    const EnsembleDecision d = decide(vectors, rule);
    out.push_back({{"image", image},
                   {"status", "ok"},
                   {"label", d.label},
                   {"score", d.mean_score},
                   {"rule", to_string(d.rule)},
                   {"votes", d.votes}});
  }
  return out;
}

}  // namespace dctguard
