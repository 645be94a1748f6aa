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

#include "dctguard/ablation.hpp"

#include <algorithm>

#include "dctguard/error.hpp"
#include "dctguard/parallel.hpp"

namespace dctguard {

SignalMetrics measure_signal(std::span<const ImageBuffer> clean,
                             std::span<const ImageBuffer> adv,
                             const CodecConfig& cfg, double tau_db, int jobs) {
  if (clean.size() != adv.size() || clean.empty()) {
    throw validation_error("signal metrics need non-empty, paired corpora");
  }
  std::vector<double> suppression(clean.size());
  std::vector<double> quality(clean.size());
  parallel_for(clean.size(), jobs, [&](std::size_t i) {
    if (clean[i].width != adv[i].width || clean[i].height != adv[i].height) {
      throw validation_error("pair " + std::to_string(i) + " differs in size");
    }
    const ImageBuffer dc = defend(clean[i], cfg);
    const ImageBuffer da = defend(adv[i], cfg);
    suppression[i] = perturbation_suppression(clean[i], adv[i], dc, da);
    quality[i] = psnr(dc, clean[i]);
  });
  SignalMetrics m;
  std::size_t below = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    m.mean_suppression += suppression[i];
    m.mean_psnr += std::min(quality[i], kPsnrCap);
    if (quality[i] < tau_db) ++below;
  }
  const double n = static_cast<double>(clean.size());
  m.mean_suppression /= n;
  m.mean_psnr /= n;
  m.frac_below_tau = static_cast<double>(below) / n;
  return m;
}

std::vector<AblationRow> run_ablation(std::span<const ImageBuffer> clean,
                                      const QuantTable& optimized,
                                      const PerturbSpec& noise, int standard_quality,
                                      double tau_db, int jobs) {
  std::vector<ImageBuffer> adv(clean.size());
  parallel_for(clean.size(), jobs, [&](std::size_t i) {
    adv[i] = apply_perturbation(clean[i], noise, i).image;
  });

  std::vector<AblationRow> rows;
  for (bool use_optimized : {false, true}) {
    for (ColorPath path : {ColorPath::kYCbCr420, ColorPath::kRgb}) {
      AblationRow row;
      row.config.color_path = path;
      if (use_optimized) {
        row.config.table = optimized;
        row.config.quality = 50;
      } else {
        row.config.quality = standard_quality;
      }
      row.name = std::string(use_optimized ? "optimized" : "standard") + "+" +
                 std::string(to_string(path));
      row.metrics = measure_signal(clean, adv, row.config, tau_db, jobs);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

nlohmann::json to_json(std::span<const AblationRow> rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"name", r.name},
                   {"color_path", to_string(r.config.color_path)},
                   {"table", r.config.table ? "optimized" : "standard-jpeg"},
                   {"quality", r.config.quality},
                   {"mean_suppression", r.metrics.mean_suppression},
                   {"mean_psnr", r.metrics.mean_psnr},
                   {"frac_below_tau", r.metrics.frac_below_tau}});
  }
  return {{"format", 1}, {"rows", arr}};
}

}  // namespace dctguard
