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
#include <cstdint>
#include <filesystem>
#include <optional>

#include "dctguard/transform.hpp"
#include "json.hpp"

namespace dctguard {

// 64 quantization steps in [1,255], stored in zigzag order.
class QuantTable {
 public:
  QuantTable();  // all ones (lossless for integer coefficients)
  explicit QuantTable(const std::array<int, 64>& zigzag_steps);

  static QuantTable uniform(int step);
  static QuantTable from_row_major(const std::array<int, 64>& steps);

  int at_zigzag(int pos) const { return steps_[pos]; }
  int at_band(int band) const { return steps_[kBandToZigzag[band]]; }
  const std::array<int, 64>& zigzag_steps() const { return steps_; }
  std::array<int, 64> row_major() const;

  bool operator==(const QuantTable&) const = default;

 private:
  std::array<int, 64> steps_;
};

nlohmann::json to_json(const QuantTable& table);
QuantTable quant_table_from_json(const nlohmann::json& j);
QuantTable read_quant_table(const std::filesystem::path& path);
void write_quant_table(const std::filesystem::path& path, const QuantTable& table);

// Quantization levels, row-major like CoefBlock.
using Levels = std::array<std::int16_t, 64>;

// Per-coefficient view of C = level * step + remainder.
struct QuantizationTrace {
  std::array<std::int16_t, 64> level{};
  std::array<double, 64> remainder{};
  std::array<double, 64> reconstructed{};
};

// Round(C / step) with ties away from zero.
std::int16_t quantize_coef(double coef, int step);

Levels quantize(const CoefBlock& c, const QuantTable& t,
                QuantizationTrace* trace = nullptr);
CoefBlock dequantize(const Levels& levels, const QuantTable& t);

// Probability that a coefficient whose remainder is uniform over one step
// keeps its quantized level when shifted by rho. Requires |rho| <= step/2.
double removal_probability(double rho, int step);

// Monte Carlo estimate of the same quantity using the real quantizer.
double measure_removal_rate(double rho, int step, std::size_t trials,
                            std::uint64_t seed);

}  // namespace dctguard
