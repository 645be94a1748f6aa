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

#include "dctguard/table_designer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include "dctguard/ablation.hpp"
#include "dctguard/codec.hpp"
#include "dctguard/error.hpp"
#include "dctguard/parallel.hpp"

namespace dctguard {

int qs_of_from_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.125)) {
    throw validation_error("eps must lie in (0, 0.125], got " + std::to_string(eps));
  }
  const double qs = round_half_away(16.0 * 255.0 * eps);
  return static_cast<int>(std::clamp(qs, 1.0, 255.0));
}

BandPartition build_partition(const BandRatio& ratio, int k) {
  if (k < kMinPattern || k > kMaxPattern) {
    throw validation_error("partition index k must be in [1,15], got " +
                           std::to_string(k));
  }
  const int size = kDiagonalCumulative[k - 1];
  BandPartition p;
  p.k = k;
  std::vector<int> of(ratio.order.begin(), ratio.order.begin() + size);
  if (std::find(of.begin(), of.end(), 0) == of.end()) of.back() = 0;
  for (int band : of) p.in_of[band] = true;
  for (int pos = 0; pos < 64; ++pos) {
    const int band = ratio.order[pos];
    (p.in_of[band] ? p.of_set : p.af_set).push_back(band);
  }
  return p;
}

QuantTable build_table(const BandPartition& partition, int qs_of, int qs_af) {
  std::array<int, 64> steps{};
  for (int band = 0; band < 64; ++band) {
    steps[band] = partition.in_of[band] ? qs_of : qs_af;
  }
  return QuantTable::from_row_major(steps);
}

Selection select_design(std::span<const GridPoint> grid) {
  if (grid.empty()) throw validation_error("empty design grid");
  auto better_feasible = [](const GridPoint& a, const GridPoint& b) {
    if (a.report.def_eff != b.report.def_eff) return a.report.def_eff > b.report.def_eff;
    if (a.qs_af != b.qs_af) return a.qs_af < b.qs_af;
    return a.k < b.k;
  };
  auto better_fallback = [](const GridPoint& a, const GridPoint& b) {
    if (a.report.acc_dec != b.report.acc_dec) return a.report.acc_dec < b.report.acc_dec;
    if (a.report.def_eff != b.report.def_eff) return a.report.def_eff > b.report.def_eff;
    if (a.qs_af != b.qs_af) return a.qs_af < b.qs_af;
    return a.k < b.k;
  };
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].report.acc_dec >= kMaxAccuracyDecline) continue;
    if (!best || better_feasible(grid[i], grid[*best])) best = i;
  }
  if (best) return {*best, false};
  std::size_t fallback = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (better_fallback(grid[i], grid[fallback])) fallback = i;
  }
  return {fallback, true};
}

namespace {

void check_report(const EvalReport& r) {
  if (!(r.acc_dec >= 0.0 && r.acc_dec <= 1.0) || !(r.def_eff >= 0.0 && r.def_eff <= 1.0)) {
    throw Error(ErrorKind::kEvaluator, "evaluator returned values outside [0,1]");
  }
}

}  // namespace

DesignResult optimize(const BandRatio& ratio, double eps, const Evaluator& evaluator,
                      int jobs) {
  const int qs_of = qs_of_from_eps(eps);
  DesignResult result;
  result.ratio = ratio;
  for (int k = kMinPattern; k <= kMaxPattern; ++k) {
    for (int qs_af : kQsAfGrid) result.grid.push_back({k, qs_af, {}});
  }
  parallel_for(result.grid.size(), jobs, [&](std::size_t i) {
    GridPoint& point = result.grid[i];
    const DesignConfig cfg{eps, point.k, qs_of, point.qs_af};
    const QuantTable table = build_table(build_partition(ratio, point.k), qs_of, point.qs_af);
    try {
      point.report = evaluator(cfg, table);
      check_report(point.report);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::kEvaluator, "grid point k=" + std::to_string(point.k) +
                                             " qs_af=" + std::to_string(point.qs_af) +
                                             ": " + e.what());
    }
  });
  const Selection sel = select_design(result.grid);
  const GridPoint& best = result.grid[sel.index];
  result.config = {eps, best.k, qs_of, best.qs_af};
  result.report = best.report;
  result.infeasible = sel.infeasible;
  result.table = build_table(build_partition(ratio, best.k), qs_of, best.qs_af);
  return result;
}

EvalReport builtin_signal_evaluator(std::span<const ImageBuffer> benign,
                                    std::span<const ImageBuffer> adv,
                                    const QuantTable& table, ColorPath path,
                                    double tau_db, int jobs) {
  if (benign.size() != adv.size()) {
    throw validation_error("signal evaluator needs adversarial images paired with "
                           "their benign originals");
  }
  CodecConfig cfg;
  cfg.color_path = path;
  cfg.table = table;
  const SignalMetrics m = measure_signal(benign, adv, cfg, tau_db, jobs);
  EvalReport r;
  r.acc_dec = m.frac_below_tau;
  r.def_eff = m.mean_suppression;
  r.metric = "signal-suppression";
  return r;
}

ExternalEvaluator::ExternalEvaluator(std::string command, std::filesystem::path benign_dir,
                                     std::filesystem::path adv_dir,
                                     std::filesystem::path work_dir)
    : command_(std::move(command)),
      benign_dir_(std::move(benign_dir)),
      adv_dir_(std::move(adv_dir)),
      work_dir_(std::move(work_dir)) {}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace

EvalReport parse_eval_report(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kEvaluator, std::string("evaluator output is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("acc_dec") || !j.contains("def_eff") ||
      !j["acc_dec"].is_number() || !j["def_eff"].is_number()) {
    throw Error(ErrorKind::kEvaluator,
                "evaluator output must be {\"acc_dec\": f, \"def_eff\": f}");
  }
  EvalReport r;
  r.acc_dec = j["acc_dec"].get<double>();
  r.def_eff = j["def_eff"].get<double>();
  r.metric = j.value("metric", std::string("external"));
  check_report(r);
  return r;
}

EvalReport ExternalEvaluator::operator()(const DesignConfig& cfg,
                                         const QuantTable& table) const {
  std::filesystem::create_directories(work_dir_);
  const auto table_path = work_dir_ / ("table_k" + std::to_string(cfg.k) + "_qs" +
                                       std::to_string(cfg.qs_af) + ".json");
  write_quant_table(table_path, table);
  const std::string cmd = command_ + " --benign-dir " + shell_quote(benign_dir_.string()) +
                          " --adv-dir " + shell_quote(adv_dir_.string()) + " --table " +
                          shell_quote(table_path.string());
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw Error(ErrorKind::kEvaluator, "cannot start evaluator");
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) out += buf;
  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(ErrorKind::kEvaluator, "evaluator exited with status " +
                                           std::to_string(WIFEXITED(status)
                                                              ? WEXITSTATUS(status)
                                                              : status));
  }
  std::istringstream lines(out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return parse_eval_report(line);
  }
  throw Error(ErrorKind::kEvaluator, "evaluator printed nothing");
}

nlohmann::json to_json(const EvalReport& report) {
  return {{"acc_dec", report.acc_dec}, {"def_eff", report.def_eff},
          {"metric", report.metric}};
}

nlohmann::json to_json(const DesignResult& r) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& p : r.grid) {
    grid.push_back({{"k", p.k}, {"qs_af", p.qs_af}, {"acc_dec", p.report.acc_dec},
                    {"def_eff", p.report.def_eff}});
  }
  return {{"format", 1},
          {"eps", r.config.eps},
          {"k", r.config.k},
          {"qs_of", r.config.qs_of},
          {"qs_af", r.config.qs_af},
          {"order", r.ratio.order},
          {"ratio", r.ratio.ratio},
          {"report", to_json(r.report)},
          {"infeasible", r.infeasible},
          {"zigzag_steps", r.table.zigzag_steps()},
          {"grid", grid}};
}

DesignResult design_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", 0) != 1) {
      throw validation_error("design: missing or unsupported \"format\"");
    }
    DesignResult r;
    r.config.eps = j.at("eps").get<double>();
    r.config.k = j.at("k").get<int>();
    r.config.qs_of = j.at("qs_of").get<int>();
    r.config.qs_af = j.at("qs_af").get<int>();
    r.ratio = band_ratio_from_json(
        {{"format", 1}, {"ratio", j.at("ratio")}, {"order", j.at("order")}});
    const auto& rep = j.at("report");
    r.report.acc_dec = rep.at("acc_dec").get<double>();
    r.report.def_eff = rep.at("def_eff").get<double>();
    r.report.metric = rep.value("metric", std::string());
    r.infeasible = j.at("infeasible").get<bool>();
    r.table = quant_table_from_json({{"format", 1}, {"zigzag_steps", j.at("zigzag_steps")}});
    for (const auto& p : j.at("grid")) {
      r.grid.push_back({p.at("k").get<int>(), p.at("qs_af").get<int>(),
                        {p.at("acc_dec").get<double>(), p.at("def_eff").get<double>(),
                         r.report.metric}});
    }
    if (r.table != build_table(build_partition(r.ratio, r.config.k), r.config.qs_of,
                               r.config.qs_af)) {
      throw validation_error("design: table does not match (order, k, qs_of, qs_af)");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("design: ") + e.what());
  }
}

}  // namespace dctguard
