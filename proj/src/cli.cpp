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

#include "dctguard/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "dctguard/ablation.hpp"
#include "dctguard/augment.hpp"
#include "dctguard/codec.hpp"
#include "dctguard/ensemble.hpp"
#include "dctguard/error.hpp"
#include "dctguard/freq_stats.hpp"
#include "dctguard/image_io.hpp"
#include "dctguard/parallel.hpp"
#include "dctguard/perturb.hpp"
#include "dctguard/table_designer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dctguard {
namespace {

struct CodecOptions {
  std::string table_path;
  std::string design_path;
  bool standard_jpeg = false;
  std::string color_path = "rgb";
  int quality = 50;
  bool no_level_shift = false;

  void add_to(CLI::App* app) {
    app->add_option("--table", table_path, "Quantization table JSON");
    app->add_option("--design", design_path, "Take the table from a design.json");
    app->add_flag("--standard-jpeg", standard_jpeg, "Use the standard JPEG tables");
    app->add_option("--color-path", color_path, "rgb or ycbcr420")->capture_default_str();
    app->add_option("--quality", quality, "IJG quality scaling, 50 = table as is")
        ->capture_default_str();
    app->add_flag("--no-level-shift", no_level_shift, "Skip the -128 level shift");
  }

  CodecConfig build() const {
    CodecConfig cfg;
    cfg.color_path = parse_color_path(color_path);
    cfg.quality = quality;
    cfg.level_shift = no_level_shift ? LevelShift::kNone : LevelShift::kShift128;
    const int sources = !table_path.empty() + !design_path.empty() + standard_jpeg;
    if (sources > 1) throw usage_error("give only one of --table, --design, --standard-jpeg");
    if (!table_path.empty()) cfg.table = read_quant_table(table_path);
    if (!design_path.empty()) cfg.table = read_design(design_path).table;
    cfg.validate();
    return cfg;
  }

  static DesignResult read_design(const fs::path& path);
};

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
}

DesignResult CodecOptions::read_design(const fs::path& path) {
  return design_from_json(read_json(path));
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  out << text;
  if (!out) throw io_error("short write to " + path.string());
}

// Writes `j` to `path` when given, otherwise to stdout.
void emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_text(path, j.dump(2) + "\n");
  }
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

// Input/output pairs for file or directory mode; directories are processed in
// lexicographic order.
std::vector<std::pair<fs::path, fs::path>> io_pairs(const fs::path& in, const fs::path& out,
                                                    const std::string& out_ext = "") {
  std::vector<std::pair<fs::path, fs::path>> pairs;
  if (fs::is_directory(in)) {
    fs::create_directories(out);
    for (const auto& p : list_images(in)) {
      fs::path target = out / p.filename();
      if (!out_ext.empty()) target.replace_extension(out_ext);
      pairs.emplace_back(p, target);
    }
  } else {
    if (!fs::exists(in)) throw io_error("no such file: " + in.string());
    pairs.emplace_back(in, out);
  }
  return pairs;
}

std::vector<ImageBuffer> images_of(const std::vector<NamedImage>& named) {
  std::vector<ImageBuffer> out;
  out.reserve(named.size());
  for (const auto& n : named) out.push_back(n.image);
  return out;
}

// adv images re-ordered to match the benign corpus by file name.
std::vector<ImageBuffer> paired_adv(const std::vector<NamedImage>& benign,
                                    const fs::path& adv_dir) {
  std::map<std::string, fs::path> by_name;
  for (const auto& p : list_images(adv_dir)) by_name[p.filename().string()] = p;
  std::vector<ImageBuffer> out;
  for (const auto& b : benign) {
    auto it = by_name.find(b.name);
    if (it == by_name.end()) {
      throw validation_error("no adversarial counterpart for " + b.name + " in " +
                             adv_dir.string());
    }
    out.push_back(read_image(it->second));
    if (out.back().width != b.image.width || out.back().height != b.image.height) {
      throw validation_error("size mismatch between benign and adversarial " + b.name);
    }
  }
  return out;
}

std::vector<ChannelTag> parse_channels(const std::vector<std::string>& names) {
  std::vector<ChannelTag> tags;
  for (const auto& n : names) tags.push_back(parse_channel(n));
  return tags;
}

int exit_code(ErrorKind kind) { return static_cast<int>(kind); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dctguard: blockwise-DCT quantization defense toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_out = false;
  bool csv_out = false;
  int jobs = 1;
  std::uint64_t seed = kDefaultSeed;
  app.add_flag("--json", json_out, "Machine-readable JSON summary on stdout");
  app.add_flag("--csv", csv_out, "Mirror tabular output as CSV on stdout");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Random seed")->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Per-band DCT standard deviations");
  std::string an_benign, an_adv, an_residuals, an_out;
  std::vector<std::string> an_channels = {"R", "G", "B", "Y", "Cb", "Cr"};
  analyze->add_option("--benign", an_benign, "Benign image directory")->required();
  analyze->add_option("--adv", an_adv, "Perturbed images paired by name: residual stats");
  analyze->add_option("--residuals", an_residuals, "Residual maps (<stem>.res): residual stats");
  analyze->add_option("--channels", an_channels, "Subset of R G B Y Cb Cr")->delimiter(',');
  analyze->add_option("--out", an_out, "stats.json path (stdout if omitted)");

  // ratio
  auto* ratio = app.add_subcommand("ratio", "Perturbation-to-benign deviation ratios");
  std::string ra_adv, ra_ben, ra_channel, ra_out;
  ratio->add_option("--adv-stats", ra_adv, "stats.json of residuals")->required();
  ratio->add_option("--benign-stats", ra_ben, "stats.json of benign images")->required();
  ratio->add_option("--channel", ra_channel, "Single channel; default merges R,G,B");
  ratio->add_option("--out", ra_out, "ratio.json path");

  // perturb
  auto* perturb = app.add_subcommand("perturb", "Synthetic eps-bounded perturbations");
  std::string pe_in, pe_out, pe_kind = "sign", pe_residuals;
  double pe_eps = 0.004, pe_sigma = kDefaultSigma;
  std::uint64_t pe_trials = 0;
  perturb->add_option("--in", pe_in, "Image or directory");
  perturb->add_option("--out", pe_out, "Image or directory");
  perturb->add_option("--kind", pe_kind, "sign, gaussian or uniform")->capture_default_str();
  perturb->add_option("--eps", pe_eps, "L-inf bound as a fraction of 255")->capture_default_str();
  perturb->add_option("--sigma", pe_sigma, "Gaussian std in sample units")->capture_default_str();
  perturb->add_option("--residuals", pe_residuals, "Residual map directory");
  perturb->add_option("--verify-bound", pe_trials, "Monte Carlo check of the DCT bound");

  // design
  auto* design = app.add_subcommand("design", "Grid search for the quantization table");
  std::string de_benign, de_adv, de_ratio, de_eval, de_out, de_table_out, de_work,
      de_path = "rgb";
  double de_eps = 0.004, de_tau = 28.0;
  design->add_option("--benign-dir", de_benign)->required();
  design->add_option("--adv-dir", de_adv)->required();
  design->add_option("--eps", de_eps)->capture_default_str();
  design->add_option("--ratio", de_ratio, "ratio.json; computed from the corpora if omitted");
  design->add_option("--evaluator", de_eval, "External evaluator command");
  design->add_option("--work-dir", de_work, "Scratch directory for external evaluation");
  design->add_option("--color-path", de_path)->capture_default_str();
  design->add_option("--tau", de_tau, "PSNR threshold (dB) of the built-in evaluator")
      ->capture_default_str();
  design->add_option("--out", de_out, "design.json path");
  design->add_option("--table-out", de_table_out, "Also write the chosen table");

  // defend / encode / decode
  auto* defend_cmd = app.add_subcommand("defend", "Quantize and reconstruct images");
  std::string df_in, df_out;
  CodecOptions df_codec;
  defend_cmd->add_option("--in", df_in)->required();
  defend_cmd->add_option("--out", df_out)->required();
  df_codec.add_to(defend_cmd);

  auto* encode_cmd = app.add_subcommand("encode", "Write a DSH1 coefficient archive");
  std::string en_in, en_out;
  CodecOptions en_codec;
  encode_cmd->add_option("--in", en_in)->required();
  encode_cmd->add_option("--out", en_out)->required();
  en_codec.add_to(encode_cmd);

  auto* decode_cmd = app.add_subcommand("decode", "Reconstruct an image from an archive");
  std::string dc_in, dc_out;
  CodecOptions dc_codec;
  decode_cmd->add_option("--in", dc_in)->required();
  decode_cmd->add_option("--out", dc_out)->required();
  dc_codec.add_to(decode_cmd);

  // scale-table
  auto* scale_cmd = app.add_subcommand("scale-table", "IJG quality scaling of a table");
  std::string st_table, st_out;
  bool st_standard = false, st_chroma = false;
  int st_quality = 50;
  scale_cmd->add_option("--table", st_table);
  scale_cmd->add_flag("--standard-jpeg", st_standard);
  scale_cmd->add_flag("--chroma", st_chroma, "Standard chroma instead of luma table");
  scale_cmd->add_option("--quality", st_quality)->required();
  scale_cmd->add_option("--out", st_out);

  // export-augment
  auto* export_cmd = app.add_subcommand("export-augment", "Noisy-training dataset export");
  std::string ex_in, ex_out;
  bool ex_check = false;
  AugmentParams ex_params;
  CodecOptions ex_codec;
  export_cmd->add_option("--in", ex_in, "Source image directory");
  export_cmd->add_option("--out", ex_out, "Dataset root")->required();
  export_cmd->add_flag("--check", ex_check, "Validate <out>/manifest.json instead");
  export_cmd->add_option("--xi", ex_params.xi)->capture_default_str();
  export_cmd->add_option("--sigma", ex_params.sigma)->capture_default_str();
  export_cmd->add_option("--qualities", ex_params.qualities)->delimiter(',');
  export_cmd->add_option("--lr", ex_params.learning_rate)->capture_default_str();
  export_cmd->add_option("--decay", ex_params.decay)->capture_default_str();
  export_cmd->add_option("--epochs", ex_params.epochs)->capture_default_str();
  ex_codec.add_to(export_cmd);

  // vote
  auto* vote_cmd = app.add_subcommand("vote", "Combine per-model confidence files");
  std::vector<std::string> vo_files;
  std::string vo_rule = "average", vo_out;
  vote_cmd->add_option("--scores", vo_files, "One JSON-lines file per model")->required();
  vote_cmd->add_option("--rule", vo_rule, "average or majority")->capture_default_str();
  vote_cmd->add_option("--out", vo_out, "Decisions (JSON lines); stdout if omitted");

  // ablate
  auto* ablate_cmd = app.add_subcommand("ablate", "Four-way table x colour-path comparison");
  std::string ab_in, ab_table, ab_design, ab_out;
  double ab_eps = 0.004, ab_tau = 28.0;
  int ab_quality = 75;
  ablate_cmd->add_option("--in", ab_in, "Benign image directory")->required();
  ablate_cmd->add_option("--table", ab_table, "Optimized table JSON");
  ablate_cmd->add_option("--design", ab_design, "Optimized table from design.json");
  ablate_cmd->add_option("--eps", ab_eps)->capture_default_str();
  ablate_cmd->add_option("--standard-quality", ab_quality)->capture_default_str();
  ablate_cmd->add_option("--tau", ab_tau)->capture_default_str();
  ablate_cmd->add_option("--out", ab_out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return exit_code(ErrorKind::kUsage);
  }

  try {
    json summary = {{"format", 1}, {"status", "ok"}};

    if (analyze->parsed()) {
      const auto benign = read_image_dir(an_benign);
      if (benign.empty()) throw validation_error("no images in " + an_benign);
      if (!an_adv.empty() && !an_residuals.empty()) {
        throw usage_error("give at most one of --adv and --residuals");
      }
      const auto clean = images_of(benign);
      std::vector<std::array<Plane, 3>> rgb_residuals;
      if (!an_adv.empty()) {
        const auto adv = paired_adv(benign, an_adv);
        for (std::size_t i = 0; i < adv.size(); ++i) {
          std::array<Plane, 3> r;
          for (int c = 0; c < 3; ++c) {
            r[c] = Plane(clean[i].width, clean[i].height);
            for (std::size_t s = 0; s < r[c].data.size(); ++s) {
              r[c].data[s] = double(adv[i].data[3 * s + c]) - clean[i].data[3 * s + c];
            }
          }
          rgb_residuals.push_back(std::move(r));
        }
      } else if (!an_residuals.empty()) {
        for (const auto& b : benign) {
          rgb_residuals.push_back(read_residual(fs::path(an_residuals) /
                                                (fs::path(b.name).stem().string() + ".res")));
        }
      }
      std::vector<BandStats> stats;
      for (ChannelTag tag : parse_channels(an_channels)) {
        if (rgb_residuals.empty()) {
          stats.push_back(estimate_band_stats(std::span<const ImageBuffer>(clean), tag, jobs));
        } else {
          std::vector<Plane> planes;
          for (const auto& r : rgb_residuals) planes.push_back(residual_channel_plane(r, tag));
          stats.push_back(estimate_band_stats(std::span<const Plane>(planes), tag, jobs));
        }
      }
      json j = stats_file_json(stats);
      j["kind"] = rgb_residuals.empty() ? "benign" : "residual";
      if (!an_out.empty() || !csv_out) emit(j, an_out, out);
      if (csv_out) {
        out << "channel,band,row,col,delta\n";
        for (const auto& s : stats) {
          for (int b = 0; b < 64; ++b) {
            out << csv_row({std::string(to_string(s.channel)), std::to_string(b),
                            std::to_string(b / 8), std::to_string(b % 8), num(s.delta[b])});
          }
        }
      }
    } else if (ratio->parsed()) {
      const auto adv = stats_from_file_json(read_json(ra_adv));
      const auto ben = stats_from_file_json(read_json(ra_ben));
      auto find = [](const std::vector<BandStats>& v, ChannelTag tag) {
        for (const auto& s : v) {
          if (s.channel == tag) return s;
        }
        throw validation_error("stats file lacks channel " + std::string(to_string(tag)));
      };
      BandRatio r;
      if (!ra_channel.empty()) {
        const ChannelTag tag = parse_channel(ra_channel);
        r = band_ratio(find(adv, tag), find(ben, tag));
      } else {
        std::vector<StatsPair> pairs;
        for (ChannelTag tag : {ChannelTag::kR, ChannelTag::kG, ChannelTag::kB}) {
          pairs.push_back({find(adv, tag), find(ben, tag)});
        }
        r = merge_rgb_ratio(pairs);
      }
      json j = to_json(r);
      j["channel"] = ra_channel.empty() ? "RGB" : ra_channel;
      if (!ra_out.empty() || !csv_out) emit(j, ra_out, out);
      if (csv_out) {
        out << "position,band,ratio\n";
        for (int p = 0; p < 64; ++p) {
          out << csv_row({std::to_string(p), std::to_string(r.order[p]),
                          num(r.ratio[r.order[p]])});
        }
      }
    } else if (perturb->parsed()) {
      PerturbSpec spec;
      spec.kind = parse_perturb_kind(pe_kind);
      spec.eps = pe_eps;
      spec.sigma = pe_sigma;
      spec.seed = seed;
      spec.validate();
      if (pe_trials > 0) {
        const DctBoundReport rep = verify_dct_bound(spec, pe_trials);
        summary["bound"] = rep.bound;
        summary["max_overall"] = rep.max_overall;
        summary["max_abs"] = rep.max_abs;
        summary["trials"] = rep.trials;
        json_out = true;
      }
      if (!pe_in.empty()) {
        if (pe_out.empty()) throw usage_error("perturb needs --out with --in");
        const bool dir_mode = fs::is_directory(pe_in);
        const auto pairs = io_pairs(pe_in, pe_out);
        fs::path res_dir = pe_residuals.empty()
                               ? (dir_mode ? fs::path(pe_out) / "residuals" : fs::path())
                               : fs::path(pe_residuals);
        if (!res_dir.empty()) fs::create_directories(res_dir);
        parallel_for(pairs.size(), jobs, [&](std::size_t i) {
          const PerturbResult r = apply_perturbation(read_image(pairs[i].first), spec, i);
          write_image(pairs[i].second, r.image);
          if (!res_dir.empty()) {
            write_residual(res_dir / (pairs[i].first.stem().string() + ".res"),
                           r.raw_residual);
          }
        });
        summary["images"] = pairs.size();
      }
      if (pe_trials == 0 && pe_in.empty()) throw usage_error("perturb needs --in or --verify-bound");
    } else if (design->parsed()) {
      const auto benign = read_image_dir(de_benign);
      if (benign.empty()) throw validation_error("no images in " + de_benign);
      const auto adv = paired_adv(benign, de_adv);
      const BandRatio r = de_ratio.empty() ? corpus_rgb_ratio(images_of(benign), adv, jobs)
                                           : band_ratio_from_json(read_json(de_ratio));
      const auto clean = images_of(benign);
      const ColorPath path = parse_color_path(de_path);
      Evaluator evaluator;
      if (de_eval.empty()) {
        evaluator = [&](const DesignConfig&, const QuantTable& t) {
          return builtin_signal_evaluator(clean, adv, t, path, de_tau, 1);
        };
      } else {
        const fs::path work =
            de_work.empty() ? fs::temp_directory_path() / ("dctguard-design-" + std::to_string(seed))
                            : fs::path(de_work);
        evaluator = ExternalEvaluator(de_eval, de_benign, de_adv, work);
      }
      const DesignResult result = optimize(r, de_eps, evaluator, jobs);
      json j = to_json(result);
      j["color_path"] = de_path;
      if (!de_out.empty() || !csv_out) emit(j, de_out, out);
      if (!de_table_out.empty()) write_quant_table(de_table_out, result.table);
      if (csv_out) {
        out << "k,qs_af,acc_dec,def_eff\n";
        for (const auto& p : result.grid) {
          out << csv_row({std::to_string(p.k), std::to_string(p.qs_af), num(p.report.acc_dec),
                          num(p.report.def_eff)});
        }
      }
      summary["k"] = result.config.k;
      summary["qs_af"] = result.config.qs_af;
      summary["qs_of"] = result.config.qs_of;
      summary["infeasible"] = result.infeasible;
    } else if (defend_cmd->parsed()) {
      const CodecConfig cfg = df_codec.build();
      const auto pairs = io_pairs(df_in, df_out);
      parallel_for(pairs.size(), jobs, [&](std::size_t i) {
        write_image(pairs[i].second, defend(read_image(pairs[i].first), cfg));
      });
      summary["images"] = pairs.size();
      summary["config_hash"] = to_hex(config_hash(cfg));
    } else if (encode_cmd->parsed()) {
      const CodecConfig cfg = en_codec.build();
      const auto pairs = io_pairs(en_in, en_out, ".dsh");
      parallel_for(pairs.size(), jobs, [&](std::size_t i) {
        write_archive(pairs[i].second, encode(read_image(pairs[i].first), cfg));
      });
      summary["archives"] = pairs.size();
    } else if (decode_cmd->parsed()) {
      const CodecConfig cfg = dc_codec.build();
      write_image(dc_out, decode(read_archive(dc_in), cfg));
    } else if (scale_cmd->parsed()) {
      if (st_standard == !st_table.empty()) {
        throw usage_error("give exactly one of --table and --standard-jpeg");
      }
      const QuantTable base = st_standard ? (st_chroma ? standard_chroma_table()
                                                       : standard_luma_table())
                                          : read_quant_table(st_table);
      emit(to_json(scale_table(base, st_quality)), st_out, out);
    } else if (export_cmd->parsed()) {
      if (ex_check) {
        const json manifest = read_json(fs::path(ex_out) / "manifest.json");
        const ManifestReport rep = validate_manifest(manifest, ex_out);
        json issues = json::array();
        for (const auto& i : rep.issues) issues.push_back({{"path", i.path}, {"message", i.message}});
        summary["valid"] = rep.ok();
        summary["issues"] = issues;
        for (const auto& i : rep.issues) err << i.path << ": " << i.message << "\n";
        if (!rep.ok()) {
          if (json_out) out << summary.dump() << "\n";
          return exit_code(ErrorKind::kValidation);
        }
      } else {
        if (ex_in.empty()) throw usage_error("export-augment needs --in");
        ex_params.seed = seed;
        const auto corpus = read_image_dir(ex_in);
        const AugmentManifest m =
            export_augment(corpus, ex_codec.build(), ex_params, ex_out, jobs);
        summary["dataset_sha256"] = m.dataset_sha256;
        summary["directories"] = m.entries.size();
      }
    } else if (vote_cmd->parsed()) {
      std::vector<fs::path> files(vo_files.begin(), vo_files.end());
      const auto decisions = vote_files(files, parse_vote_rule(vo_rule));
      std::string text;
      std::size_t incomplete = 0;
      for (const auto& d : decisions) {
        text += d.dump() + "\n";
        if (d["status"] == "incomplete") ++incomplete;
      }
      if (vo_out.empty()) {
        out << text;
      } else {
        write_text(vo_out, text);
      }
      summary["images"] = decisions.size();
      summary["incomplete"] = incomplete;
    } else if (ablate_cmd->parsed()) {
      if (ab_table.empty() == ab_design.empty()) {
        throw usage_error("give exactly one of --table and --design");
      }
      const QuantTable optimized = ab_table.empty()
                                       ? CodecOptions::read_design(ab_design).table
                                       : read_quant_table(ab_table);
      const auto clean = images_of(read_image_dir(ab_in));
      if (clean.empty()) throw validation_error("no images in " + ab_in);
      PerturbSpec noise;
      noise.kind = PerturbKind::kSign;
      noise.eps = ab_eps;
      noise.seed = seed;
      const auto rows = run_ablation(clean, optimized, noise, ab_quality, ab_tau, jobs);
      json j = to_json(rows);
      j["eps"] = ab_eps;
      j["seed"] = seed;
      if (!ab_out.empty() || !csv_out) emit(j, ab_out, out);
      if (csv_out) {
        out << "name,color_path,table,quality,mean_suppression,mean_psnr,frac_below_tau\n";
        for (const auto& r : rows) {
          out << csv_row({r.name, std::string(to_string(r.config.color_path)),
                          r.config.table ? "optimized" : "standard-jpeg",
                          std::to_string(r.config.quality), num(r.metrics.mean_suppression),
                          num(r.metrics.mean_psnr), num(r.metrics.frac_below_tau)});
        }
      }
    }
    if (json_out) out << summary.dump() << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (json_out) {
      out << json{{"format", 1}, {"status", "error"}, {"message", e.what()},
                  {"code", exit_code(e.kind())}}.dump()
          << "\n";
    }
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(ErrorKind::kIo);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(ErrorKind::kValidation);
  }
}

}  // namespace dctguard
