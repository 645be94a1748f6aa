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
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dctguard/freq_stats.hpp"
#include "dctguard/image.hpp"
#include "dctguard/quant.hpp"
#include "json.hpp"

namespace dctguard {

// Number of bands above and including anti-diagonal k (k = 1..15) of an 8x8
// block: the OF-set size of partition pattern k.
inline constexpr std::array<int, 15> kDiagonalCumulative = {
    1, 3, 6, 10, 15, 21, 28, 36, 43, 49, 54, 58, 61, 63, 64};

inline constexpr int kMinPattern = 1;
inline constexpr int kMaxPattern = 15;

// QS_AF candidates 1, 6, ..., 116.
inline constexpr std::array<int, 24> kQsAfGrid = [] {
  std::array<int, 24> g{};
  for (int i = 0; i < 24; ++i) g[i] = 1 + 5 * i;
  return g;
}();

// Step that keeps a perturbation of amplitude eps*255 within a quarter step:
// round(16 * 255 * eps), clamped to [1,255]. Requires 0 < eps <= 0.125.
int qs_of_from_eps(double eps);

struct BandPartition {
  int k = 0;
  std::array<bool, 64> in_of{};  // row-major band index
  std::vector<int> of_set;
  std::vector<int> af_set;
};

// The first kDiagonalCumulative[k-1] bands of the ascending-ratio order form
// the OF set. DC always belongs to it; if the order placed DC later, it
// replaces the OF member with the largest ratio.
BandPartition build_partition(const BandRatio& ratio, int k);

QuantTable build_table(const BandPartition& partition, int qs_of, int qs_af);

struct DesignConfig {
  double eps = 0.004;
  int k = kMaxPattern;
  int qs_of = 16;
  int qs_af = 16;
};

struct EvalReport {
  double acc_dec = 0.0;  // accuracy decline on benign inputs, [0,1]
  double def_eff = 0.0;  // defense efficiency on perturbed inputs, [0,1]
  std::string metric = "signal-suppression";
};

inline constexpr double kMaxAccuracyDecline = 0.01;

using Evaluator = std::function<EvalReport(const DesignConfig&, const QuantTable&)>;

struct GridPoint {
  int k = 0;
  int qs_af = 0;
  EvalReport report;
};

// Feasible points (acc_dec < 1%) compete on def_eff; ties go to the smaller
// qs_af, then the smaller k. With no feasible point the smallest acc_dec
// wins (then larger def_eff, smaller qs_af, smaller k) and `infeasible` is
// set.
struct Selection {
  std::size_t index = 0;
  bool infeasible = false;
};
Selection select_design(std::span<const GridPoint> grid);

struct DesignResult {
  DesignConfig config;
  EvalReport report;
  bool infeasible = false;
  BandRatio ratio;
  QuantTable table;
  std::vector<GridPoint> grid;  // k-major, then qs_af ascending
};

// Exhaustive search over k in 1..15 and qs_af in kQsAfGrid with
// qs_of = qs_of_from_eps(eps). Evaluator exceptions are rethrown as
// evaluator errors naming the grid point.
DesignResult optimize(const BandRatio& ratio, double eps, const Evaluator& evaluator,
                      int jobs = 1);

// Built-in proxy objective: def_eff is the mean perturbation-energy
// suppression over pairs, acc_dec the fraction of benign images whose
// defended PSNR falls below tau_db.
EvalReport builtin_signal_evaluator(std::span<const ImageBuffer> benign,
                                    std::span<const ImageBuffer> adv,
                                    const QuantTable& table,
                                    ColorPath path = ColorPath::kRgb,
                                    double tau_db = 28.0, int jobs = 1);

// Runs `command --benign-dir B --adv-dir A --table T` per grid point and
// parses {"acc_dec": f, "def_eff": f} from the first stdout line.
class ExternalEvaluator {
 public:
  ExternalEvaluator(std::string command, std::filesystem::path benign_dir,
                    std::filesystem::path adv_dir, std::filesystem::path work_dir);

  EvalReport operator()(const DesignConfig& cfg, const QuantTable& table) const;

 private:
  std::string command_;
  std::filesystem::path benign_dir_;
  std::filesystem::path adv_dir_;
  std::filesystem::path work_dir_;
};

EvalReport parse_eval_report(const std::string& line);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const DesignResult& result);
DesignResult design_from_json(const nlohmann::json& j);

}  // namespace dctguard
