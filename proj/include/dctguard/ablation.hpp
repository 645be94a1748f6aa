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

#include <span>
#include <string>
#include <vector>

#include "dctguard/codec.hpp"
#include "dctguard/perturb.hpp"
#include "json.hpp"

namespace dctguard {

struct SignalMetrics {
  double mean_suppression = 0.0;
  double mean_psnr = 0.0;  // per-image PSNR capped at kPsnrCap
  double frac_below_tau = 0.0;
};

// Defends each clean/perturbed pair with `cfg` and averages the suppression
// and benign PSNR. `adv` must be index-aligned with `clean`.
SignalMetrics measure_signal(std::span<const ImageBuffer> clean,
                             std::span<const ImageBuffer> adv,
                             const CodecConfig& cfg, double tau_db, int jobs = 1);

struct AblationRow {
  std::string name;
  CodecConfig config;
  SignalMetrics metrics;
};

// The four table x colour-path combinations: standard JPEG tables at
// `standard_quality` or the optimized table, each on the YCbCr 4:2:0 and
// RGB paths.
std::vector<AblationRow> run_ablation(std::span<const ImageBuffer> clean,
                                      const QuantTable& optimized,
                                      const PerturbSpec& noise,
                                      int standard_quality = 75,
                                      double tau_db = 28.0, int jobs = 1);

nlohmann::json to_json(std::span<const AblationRow> rows);

}  // namespace dctguard
