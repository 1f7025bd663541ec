#pragma once

#include <algorithm>
#include <cstdint>

namespace rdv {

// Divide num/den rounding halves to the nearest even integer. num >= 0, den > 0.
inline std::int64_t div_round_half_even(std::int64_t num, std::int64_t den) {
  std::int64_t q = num / den;
  std::int64_t r = num % den;
  std::int64_t twice = 2 * r;
  if (twice > den) return q + 1;
  if (twice == den) return q + (q & 1);
  return q;
}

// Average of two samples, ties to even.
inline int avg_round_half_even(int a, int b) {
  int s = a + b;
  int q = s >> 1;
  if ((s & 1) && (q & 1)) ++q;
  return q;
}

inline std::uint8_t clamp_u8(int v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

inline int clamp_int(int v, int lo, int hi) { return std::clamp(v, lo, hi); }

// Halve a motion component, rounding halves away from zero.
inline int div2_round_half_away(int v) {
  return v >= 0 ? (v + 1) >> 1 : -((-v + 1) >> 1);
}

}  // namespace rdv
