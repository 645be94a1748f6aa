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

#include "dctguard/augment.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>

#include "dctguard/error.hpp"
#include "dctguard/hash.hpp"
#include "dctguard/parallel.hpp"

namespace fs = std::filesystem;

namespace dctguard {

std::string quality_dir(int quality) { return "q" + std::to_string(quality); }

namespace {

void check_params(const AugmentParams& p) {
  if (!(p.xi >= 0.0 && p.xi <= 1.0)) throw validation_error("xi must lie in [0,1]");
  if (p.qualities.empty()) throw validation_error("no qualities requested");
  for (std::size_t i = 0; i < p.qualities.size(); ++i) {
    if (p.qualities[i] < 1 || p.qualities[i] > 100) {
      throw validation_error("quality out of [1,100]: " + std::to_string(p.qualities[i]));
    }
    if (i > 0 && p.qualities[i] >= p.qualities[i - 1]) {
      throw validation_error("qualities must be strictly descending");
    }
  }
  if (!(p.sigma >= 0.0)) throw validation_error("sigma must be >= 0");
}

std::string model_name(int quality) { return "M" + std::to_string(quality); }

}  // namespace

AugmentManifest export_augment(std::span<const NamedImage> corpus,
                               const CodecConfig& cfg, const AugmentParams& params,
                               const fs::path& out_dir, int jobs) {
  check_params(params);
  cfg.validate();
  if (corpus.empty()) throw validation_error("augment export needs a non-empty corpus");

  std::vector<std::string> out_names;
  std::set<std::string> seen;
  for (const auto& item : corpus) {
    std::string name = fs::path(item.name).stem().string() + ".png";
    if (!seen.insert(name).second) {
      throw validation_error("two inputs map to the same output name " + name);
    }
    out_names.push_back(std::move(name));
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw io_error("cannot create output directory " + out_dir.string());
  }

  AugmentManifest m;
  m.params = params;
  m.codec = cfg;
  m.n_images = corpus.size();
  const std::size_t nq = params.qualities.size();
  for (int q : params.qualities) {
    m.entries.push_back({q, quality_dir(q), std::vector<ExportedFile>(corpus.size())});
    fs::create_directories(out_dir / quality_dir(q), ec);
    if (ec) throw io_error("cannot create " + (out_dir / quality_dir(q)).string());
  }

  parallel_for(nq * corpus.size(), jobs, [&](std::size_t job) {
    const std::size_t qi = job / corpus.size();
    const std::size_t ii = job % corpus.size();
    CodecConfig qcfg = cfg;
    qcfg.quality = params.qualities[qi];
    const ImageBuffer compressed = defend(corpus[ii].image, qcfg);
    PerturbSpec noise;
    noise.kind = PerturbKind::kGaussian;
    noise.eps = 0.0;
    noise.sigma = params.sigma;
    noise.seed = mix_seed(params.seed, static_cast<std::uint64_t>(qcfg.quality));
    const ImageBuffer noisy = apply_perturbation(compressed, noise, ii).image;
    const auto bytes = encode_png(noisy);
    write_file(out_dir / quality_dir(qcfg.quality) / out_names[ii], bytes);
    m.entries[qi].files[ii] = {out_names[ii], to_hex(sha256(bytes))};
  });

  std::string listing;
  for (const auto& e : m.entries) {
    for (const auto& f : e.files) listing += e.dir + "/" + f.name + ":" + f.sha256 + "\n";
  }
  m.dataset_sha256 = to_hex(sha256(listing));

  std::ofstream out(out_dir / "manifest.json");
  if (!out) throw io_error("cannot write " + (out_dir / "manifest.json").string());
  out << to_json(m).dump(2) << "\n";
  return m;
}

nlohmann::json to_json(const AugmentManifest& m) {
  const AugmentParams& p = m.params;
  nlohmann::json chain = nlohmann::json::array();
  chain.push_back({{"model", "M"}, {"quality", nullptr}, {"init_from", nullptr}});
  std::string prev = "M";
  for (int q : p.qualities) {
    chain.push_back({{"model", model_name(q)}, {"quality", q}, {"init_from", prev},
                     {"dir", quality_dir(q)}});
    prev = model_name(q);
  }
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : e.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}});
    entries.push_back({{"quality", e.quality}, {"dir", e.dir}, {"files", files}});
  }
  nlohmann::json codec = {
      {"color_path", to_string(m.codec.color_path)},
      {"level_shift", m.codec.level_shift == LevelShift::kShift128},
      {"config_hash", to_hex(config_hash(m.codec))}};
  if (m.codec.table) {
    codec["table"] = m.codec.table->zigzag_steps();
  } else {
    codec["table"] = "standard-jpeg";
  }
  return {{"format", 1},
          {"xi", p.xi},
          {"qualities", p.qualities},
          {"sigma", p.sigma},
          {"seed", p.seed},
          {"noise_mode", "offline"},
          {"codec", codec},
          {"training",
           {{"optimizer", "sgd"},
            {"learning_rate", p.learning_rate},
            {"decay", p.decay},
            {"epochs", p.epochs},
            {"loss", "xi*J(x) + (1-xi)*J(x_q)"}}},
          {"chain", chain},
          {"ensemble", p.ensemble},
          {"n_images", m.n_images},
          {"entries", entries},
          {"dataset_sha256", m.dataset_sha256}};
}

namespace {

class Checker {
 public:
  explicit Checker(ManifestReport& report) : report_(report) {}

  void fail(const std::string& path, const std::string& message) {
    report_.issues.push_back({path, message});
  }

  const nlohmann::json* field(const nlohmann::json& obj, const std::string& parent,
                              const char* key) {
    if (!obj.is_object() || !obj.contains(key)) {
      fail(parent + "/" + key, "missing");
      return nullptr;
    }
    return &obj[key];
  }

  std::optional<double> number(const nlohmann::json& obj, const std::string& parent,
                               const char* key) {
    const auto* v = field(obj, parent, key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(parent + "/" + key, "not a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

 private:
  ManifestReport& report_;
};

}  // namespace

ManifestReport validate_manifest(const nlohmann::json& j, const fs::path& root) {
  ManifestReport report;
  Checker check(report);
  if (!j.is_object()) {
    check.fail("", "manifest is not a JSON object");
    return report;
  }
  if (j.value("format", 0) != 1) check.fail("/format", "expected 1");

  if (auto xi = check.number(j, "", "xi"); xi && !(*xi >= 0.0 && *xi <= 1.0)) {
    check.fail("/xi", "xi = " + std::to_string(*xi) + " outside [0,1]");
  }
  if (auto sigma = check.number(j, "", "sigma"); sigma && *sigma < 0.0) {
    check.fail("/sigma", "negative");
  }
  if (const auto* mode = check.field(j, "", "noise_mode");
      mode && *mode != "offline") {
    check.fail("/noise_mode", "expected \"offline\"");
  }

  std::vector<int> qualities;
  if (const auto* qs = check.field(j, "", "qualities")) {
    if (!qs->is_array() || qs->empty()) {
      check.fail("/qualities", "must be a non-empty array");
    } else {
      for (std::size_t i = 0; i < qs->size(); ++i) {
        const std::string path = "/qualities/" + std::to_string(i);
        if (!(*qs)[i].is_number_integer()) {
          check.fail(path, "not an integer");
          continue;
        }
        const int q = (*qs)[i].get<int>();
        if (q < 1 || q > 100) check.fail(path, "quality outside [1,100]");
        if (!qualities.empty() && q >= qualities.back()) {
          check.fail(path, "qualities must be strictly descending");
        }
        qualities.push_back(q);
      }
    }
  }

  if (const auto* t = check.field(j, "", "training")) {
    if (auto lr = check.number(*t, "/training", "learning_rate"); lr && *lr <= 0.0) {
      check.fail("/training/learning_rate", "must be positive");
    }
    if (auto d = check.number(*t, "/training", "decay"); d && !(*d > 0.0 && *d <= 1.0)) {
      check.fail("/training/decay", "must lie in (0,1]");
    }
    if (auto e = check.number(*t, "/training", "epochs"); e && *e < 1.0) {
      check.fail("/training/epochs", "must be >= 1");
    }
  }

  std::set<std::string> models;
  if (const auto* chain = check.field(j, "", "chain")) {
    if (!chain->is_array() || chain->size() != qualities.size() + 1) {
      check.fail("/chain", "length must equal number of qualities + 1");
    } else {
      std::string prev;
      for (std::size_t i = 0; i < chain->size(); ++i) {
        const auto& link = (*chain)[i];
        const std::string path = "/chain/" + std::to_string(i);
        const std::string want = i == 0 ? "M" : model_name(qualities[i - 1]);
        if (link.value("model", std::string()) != want) {
          check.fail(path + "/model", "expected " + want);
        }
        const auto init = link.contains("init_from") ? link["init_from"] : nlohmann::json();
        if (i == 0 ? !init.is_null() : init != prev) {
          check.fail(path + "/init_from",
                     i == 0 ? "base model has no parent" : "expected " + prev);
        }
        if (i > 0 && link.value("quality", -1) != qualities[i - 1]) {
          check.fail(path + "/quality", "does not match /qualities");
        }
        models.insert(want);
        prev = want;
      }
    }
  }
  if (const auto* ens = check.field(j, "", "ensemble")) {
    if (!ens->is_array() || ens->empty()) {
      check.fail("/ensemble", "must be a non-empty array");
    } else {
      for (std::size_t i = 0; i < ens->size(); ++i) {
        if (!(*ens)[i].is_string() || !models.count((*ens)[i].get<std::string>())) {
          check.fail("/ensemble/" + std::to_string(i), "not a model of the chain");
        }
      }
    }
  }

  const auto n_images = j.value("n_images", static_cast<std::size_t>(0));
  const auto* entries = check.field(j, "", "entries");
  if (entries == nullptr || !entries->is_array()) return report;
  for (int q : qualities) {
    const std::string qname = "quality " + std::to_string(q);
    auto it = std::find_if(entries->begin(), entries->end(), [&](const nlohmann::json& e) {
      return e.value("quality", -1) == q;
    });
    if (it == entries->end()) {
      check.fail("/entries", qname + ": no entry (q=" + std::to_string(q) + ")");
      continue;
    }
    const std::string path = "/entries/" + std::to_string(it - entries->begin());
    const std::string dir = it->value("dir", quality_dir(q));
    if (!fs::is_directory(root / dir)) {
      check.fail(path + "/dir", qname + ": directory " + dir + " is missing (q=" +
                                    std::to_string(q) + ")");
      continue;
    }
    const auto files = it->value("files", nlohmann::json::array());
    if (files.size() != n_images) {
      check.fail(path + "/files", qname + ": " + std::to_string(files.size()) +
                                      " files, expected " + std::to_string(n_images));
    }
    for (std::size_t f = 0; f < files.size(); ++f) {
      const std::string name = files[f].value("name", std::string());
      const fs::path file = root / dir / name;
      const std::string fpath = path + "/files/" + std::to_string(f);
      if (name.empty() || !fs::is_regular_file(file)) {
        check.fail(fpath, qname + ": missing file " + (fs::path(dir) / name).string());
        continue;
      }
      const auto bytes = read_file(file);
      if (to_hex(sha256(bytes)) != files[f].value("sha256", std::string())) {
        check.fail(fpath + "/sha256", qname + ": content hash mismatch for " + name);
      }
    }
  }
  return report;
}

}  // namespace dctguard
