#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "rdv/errors.hpp"

namespace rdv {

// Quantization operating point. delta halves every two steps; lambda_mode is
// the Lagrange multiplier used for in-loop Skip/coded decisions at that step.
struct QualityLevel {
  int index = 1;       // 1 (coarsest) .. 8 (finest)
  double delta = 128.0;
  double lambda_mode = 1638.4;
};

inline QualityLevel quality_level(int index) {
  // 128 * 2^(-(i-1)/2), written out so every build uses identical constants.
  static constexpr double kDelta[8] = {
      128.0, 90.50966799187809, 64.0, 45.254833995939045,
      32.0,  22.627416997969522, 16.0, 11.313708498984761};
  if (index < 1 || index > 8)
    throw ConfigError("quality index must be in [1,8]");
  double d = kDelta[index - 1];
  return {index, d, 0.1 * d * d};
}

namespace detail {

// Orthonormal 8-point DCT-II basis, rows are basis vectors.
inline constexpr double kDct8[8][8] = {
    {0.3535533905932738, 0.3535533905932738, 0.3535533905932738,
     0.3535533905932738, 0.3535533905932738, 0.3535533905932738,
     0.3535533905932738, 0.3535533905932738},
    {0.4903926402016152, 0.4157348061512726, 0.27778511650980114,
     0.09754516100806417, -0.0975451610080641, -0.277785116509801,
     -0.4157348061512727, -0.4903926402016152},
    {0.46193976625564337, 0.19134171618254492, -0.19134171618254486,
     -0.46193976625564337, -0.4619397662556434, -0.19134171618254517,
     0.191341716182545, 0.46193976625564326},
    {0.4157348061512726, -0.0975451610080641, -0.4903926402016152,
     -0.2777851165098011, 0.2777851165098009, 0.4903926402016152,
     0.09754516100806439, -0.41573480615127256},
    {0.3535533905932738, -0.35355339059327373, -0.35355339059327384,
     0.3535533905932737, 0.35355339059327384, -0.35355339059327334,
     -0.35355339059327356, 0.3535533905932733},
    {0.27778511650980114, -0.4903926402016152, 0.09754516100806415,
     0.41573480615127273, -0.41573480615127256, -0.09754516100806401,
     0.4903926402016153, -0.27778511650980076},
    {0.19134171618254492, -0.4619397662556434, 0.46193976625564326,
     -0.19134171618254495, -0.19134171618254528, 0.46193976625564337,
     -0.4619397662556432, 0.19134171618254478},
    {0.09754516100806417, -0.2777851165098011, 0.41573480615127273,
     -0.4903926402016153, 0.4903926402016152, -0.4157348061512725,
     0.27778511650980076, -0.09754516100806429}};

}  // namespace detail

// 2-D orthonormal DCT-II of an 8x8 block, row-major in/out.
inline void dct8x8_forward(const double in[64], double out[64]) {
  double tmp[64];
  for (int k = 0; k < 8; ++k)
    for (int n2 = 0; n2 < 8; ++n2) {
      double acc = 0.0;
      for (int n = 0; n < 8; ++n) acc += detail::kDct8[k][n] * in[n * 8 + n2];
      tmp[k * 8 + n2] = acc;
    }
  for (int k = 0; k < 8; ++k)
    for (int l = 0; l < 8; ++l) {
      double acc = 0.0;
      for (int n = 0; n < 8; ++n) acc += detail::kDct8[l][n] * tmp[k * 8 + n];
      out[k * 8 + l] = acc;
    }
}

// Inverse (DCT-III). Output is real-valued; round separately when mapping
// back to integer residuals.
inline void dct8x8_inverse(const double in[64], double out[64]) {
  double tmp[64];
  for (int n = 0; n < 8; ++n)
    for (int l = 0; l < 8; ++l) {
      double acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += detail::kDct8[k][n] * in[k * 8 + l];
      tmp[n * 8 + l] = acc;
    }
  for (int n = 0; n < 8; ++n)
    for (int m = 0; m < 8; ++m) {
      double acc = 0.0;
      for (int l = 0; l < 8; ++l) acc += detail::kDct8[l][m] * tmp[n * 8 + l];
      out[n * 8 + m] = acc;
    }
}

// Uniform quantizer, halves away from zero. Levels beyond 16 bits flag
// pathological input.
inline std::int32_t quantize_coeff(double coeff, const QualityLevel& q) {
  double mag = std::floor(std::abs(coeff) / q.delta + 0.5);
  if (mag > 32768.0) throw RangeError("quantizer level overflow");
  auto level = static_cast<std::int32_t>(mag);
  return coeff < 0 ? -level : level;
}

inline double dequantize_coeff(std::int32_t level, const QualityLevel& q) {
  return static_cast<double>(level) * q.delta;
}

inline void quantize_block(const double coeffs[64], const QualityLevel& q,
                           std::int32_t levels[64]) {
  for (int i = 0; i < 64; ++i) levels[i] = quantize_coeff(coeffs[i], q);
}

inline void dequantize_block(const std::int32_t levels[64],
                             const QualityLevel& q, double coeffs[64]) {
  for (int i = 0; i < 64; ++i) coeffs[i] = dequantize_coeff(levels[i], q);
}

}  // namespace rdv
