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

#include "dctguard/quant.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "dctguard/error.hpp"

namespace dctguard {
namespace {

void check_step(int step, int pos) {
  if (step < 1 || step > 255) {
    throw validation_error("quantization step " + std::to_string(step) +
                           " at zigzag position " + std::to_string(pos) +
                           " outside [1,255]");
  }
}

}  // namespace

QuantTable::QuantTable() { steps_.fill(1); }

QuantTable::QuantTable(const std::array<int, 64>& zigzag_steps)
    : steps_(zigzag_steps) {
  for (int pos = 0; pos < 64; ++pos) check_step(steps_[pos], pos);
}

QuantTable QuantTable::uniform(int step) {
  std::array<int, 64> s;
  s.fill(step);
  return QuantTable(s);
}

QuantTable QuantTable::from_row_major(const std::array<int, 64>& steps) {
  std::array<int, 64> zz{};
  for (int pos = 0; pos < 64; ++pos) zz[pos] = steps[kZigzagToBand[pos]];
  return QuantTable(zz);
}

std::array<int, 64> QuantTable::row_major() const {
  std::array<int, 64> rm{};
  for (int pos = 0; pos < 64; ++pos) rm[kZigzagToBand[pos]] = steps_[pos];
  return rm;
}

nlohmann::json to_json(const QuantTable& table) {
  return {{"format", 1}, {"zigzag_steps", table.zigzag_steps()}};
}

QuantTable quant_table_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", 0) != 1) {
    throw validation_error("quant table: missing or unsupported \"format\"");
  }
  const auto it = j.find("zigzag_steps");
  if (it == j.end() || !it->is_array() || it->size() != 64) {
    throw validation_error("quant table: \"zigzag_steps\" must hold 64 integers");
  }
  std::array<int, 64> steps{};
  for (int i = 0; i < 64; ++i) {
    if (!(*it)[i].is_number_integer()) {
      throw validation_error("quant table: zigzag_steps[" + std::to_string(i) +
                             "] is not an integer");
    }
    steps[i] = (*it)[i].get<int>();
  }
  return QuantTable(steps);
}

QuantTable read_quant_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(path.string() + ": " + e.what());
  }
  return quant_table_from_json(j);
}

void write_quant_table(const std::filesystem::path& path, const QuantTable& table) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path.string());
  out << to_json(table).dump() << "\n";
}

std::int16_t quantize_coef(double coef, int step) {
  const double q = std::round(coef / step);
  constexpr double lo = std::numeric_limits<std::int16_t>::min();
  constexpr double hi = std::numeric_limits<std::int16_t>::max();
  return static_cast<std::int16_t>(q < lo ? lo : (q > hi ? hi : q));
}

Levels quantize(const CoefBlock& c, const QuantTable& t, QuantizationTrace* trace) {
  Levels levels{};
  for (int band = 0; band < 64; ++band) {
    const int step = t.at_band(band);
    levels[band] = quantize_coef(c[band], step);
    if (trace != nullptr) {
      const double recon = static_cast<double>(levels[band]) * step;
      trace->level[band] = levels[band];
      trace->reconstructed[band] = recon;
      trace->remainder[band] = c[band] - recon;
    }
  }
  return levels;
}

CoefBlock dequantize(const Levels& levels, const QuantTable& t) {
  CoefBlock c;
  for (int band = 0; band < 64; ++band) {
    c[band] = static_cast<double>(levels[band]) * t.at_band(band);
  }
  return c;
}

double removal_probability(double rho, int step) {
  if (step < 1) throw validation_error("quantization step must be >= 1");
  if (std::abs(rho) > step / 2.0) {
    throw validation_error("|rho| = " + std::to_string(std::abs(rho)) +
                           " exceeds step/2 = " + std::to_string(step / 2.0));
  }
  return 1.0 - std::abs(rho) / step;
}

double measure_removal_rate(double rho, int step, std::size_t trials,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> remainder(-step / 2.0, step / 2.0);
  std::uniform_int_distribution<int> level(-20, 20);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const double c = level(rng) * static_cast<double>(step) + remainder(rng);
    if (quantize_coef(c, step) == quantize_coef(c + rho, step)) ++kept;
  }
  return trials == 0 ? 1.0 : static_cast<double>(kept) / trials;
}

}  // namespace dctguard
