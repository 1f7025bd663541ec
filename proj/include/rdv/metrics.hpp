#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rdv/errors.hpp"
#include "rdv/frame.hpp"

namespace rdv {

struct RdPoint {
  double rate = 0.0;       // bits per second
  double quality_db = 0.0; // MS-SSIM in dB
};

namespace detail {

struct DoublePlane {
  int w = 0, h = 0;
  std::vector<double> v;
};

inline DoublePlane to_double(const std::vector<std::uint8_t>& p, int w, int h) {
  DoublePlane d{w, h, std::vector<double>(p.begin(), p.end())};
  return d;
}

// 11-tap Gaussian, sigma 1.5, normalized.
inline const std::array<double, 11>& gaussian11() {
  static const std::array<double, 11> taps = [] {
    std::array<double, 11> t{};
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
      double d = i - 5;
      t[i] = std::exp(-(d * d) / (2.0 * 1.5 * 1.5));
      sum += t[i];
    }
    for (double& x : t) x /= sum;
    return t;
  }();
  return taps;
}

// Separable valid-mode convolution with the 11-tap window.
inline DoublePlane filter_valid(const DoublePlane& in) {
  const auto& g = gaussian11();
  DoublePlane mid{in.w - 10, in.h, {}};
  mid.v.resize(static_cast<std::size_t>(mid.w) * mid.h);
  for (int y = 0; y < in.h; ++y)
    for (int x = 0; x < mid.w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 11; ++k) acc += g[k] * in.v[static_cast<std::size_t>(y) * in.w + x + k];
      mid.v[static_cast<std::size_t>(y) * mid.w + x] = acc;
    }
  DoublePlane out{mid.w, in.h - 10, {}};
  out.v.resize(static_cast<std::size_t>(out.w) * out.h);
  for (int y = 0; y < out.h; ++y)
    for (int x = 0; x < out.w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < 11; ++k) acc += g[k] * mid.v[static_cast<std::size_t>(y + k) * mid.w + x];
      out.v[static_cast<std::size_t>(y) * out.w + x] = acc;
    }
  return out;
}

inline DoublePlane half(const DoublePlane& in) {
  DoublePlane out{in.w / 2, in.h / 2, {}};
  out.v.resize(static_cast<std::size_t>(out.w) * out.h);
  for (int y = 0; y < out.h; ++y)
    for (int x = 0; x < out.w; ++x) {
      std::size_t i = static_cast<std::size_t>(2 * y) * in.w + 2 * x;
      out.v[static_cast<std::size_t>(y) * out.w + x] =
          (in.v[i] + in.v[i + 1] + in.v[i + in.w] + in.v[i + in.w + 1]) * 0.25;
    }
  return out;
}

struct ScaleScore {
  double cs = 0.0;
  double ssim = 0.0;  // luminance * cs
};

inline ScaleScore ssim_scale(const DoublePlane& a, const DoublePlane& b) {
  constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);
  DoublePlane mu1 = filter_valid(a);
  DoublePlane mu2 = filter_valid(b);
  DoublePlane a2{a.w, a.h, {}}, b2{a.w, a.h, {}}, ab{a.w, a.h, {}};
  a2.v.resize(a.v.size());
  b2.v.resize(a.v.size());
  ab.v.resize(a.v.size());
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    a2.v[i] = a.v[i] * a.v[i];
    b2.v[i] = b.v[i] * b.v[i];
    ab.v[i] = a.v[i] * b.v[i];
  }
  DoublePlane ea2 = filter_valid(a2);
  DoublePlane eb2 = filter_valid(b2);
  DoublePlane eab = filter_valid(ab);

  double cs_sum = 0.0, ssim_sum = 0.0;
  for (std::size_t i = 0; i < mu1.v.size(); ++i) {
    double m1 = mu1.v[i], m2 = mu2.v[i];
    double s1 = ea2.v[i] - m1 * m1;
    double s2 = eb2.v[i] - m2 * m2;
    double s12 = eab.v[i] - m1 * m2;
    double cs = (2.0 * s12 + kC2) / (s1 + s2 + kC2);
    double lum = (2.0 * m1 * m2 + kC1) / (m1 * m1 + m2 * m2 + kC1);
    cs_sum += cs;
    ssim_sum += lum * cs;
  }
  double n = static_cast<double>(mu1.v.size());
  return {cs_sum / n, ssim_sum / n};
}

}  // namespace detail

// 5-scale MS-SSIM on luma with the standard 11x11 sigma-1.5 window and scale
// weights. Inputs must keep the coarsest scale at 16x16 or larger, i.e. both
// dimensions at least 256.
inline double ms_ssim(const Frame& a, const Frame& b) {
  if (!a.same_geometry(b)) throw DimensionError("ms_ssim needs equal geometry");
  static constexpr double kWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
  if (a.width / 16 < 16 || a.height / 16 < 16)
    throw DimensionError("frame too small for 5-scale MS-SSIM");

  detail::DoublePlane pa = detail::to_double(a.y, a.width, a.height);
  detail::DoublePlane pb = detail::to_double(b.y, b.width, b.height);
  double score = 1.0;
  for (int scale = 0; scale < 5; ++scale) {
    detail::ScaleScore s = detail::ssim_scale(pa, pb);
    double term = scale < 4 ? s.cs : s.ssim;
    term = std::max(term, 0.0);
    score *= std::pow(term, kWeights[scale]);
    if (scale < 4) {
      pa = detail::half(pa);
      pb = detail::half(pb);
    }
  }
  return std::clamp(score, 0.0, 1.0);
}

// Sequence score is the mean frame score.
inline double ms_ssim(const Sequence& a, const Sequence& b) {
  if (a.frames.size() != b.frames.size() || a.empty())
    throw DimensionError("sequences must be non-empty and equally long");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.frames.size(); ++i)
    sum += ms_ssim(a.frames[i], b.frames[i]);
  return sum / static_cast<double>(a.frames.size());
}

// -10 log10(1 - s); a perfect score maps to +100 dB.
inline double ms_ssim_db(double s) {
  if (s < 0.0 || s > 1.0) throw RangeError("MS-SSIM must lie in [0,1]");
  double rest = 1.0 - s;
  if (rest <= 0.0) return 100.0;
  return -10.0 * std::log10(rest);
}

inline double psnr_from_mse(double mse) {
  if (mse <= 0.0) return 100.0;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace detail {

inline double luma_mse_sum(const Frame& a, const Frame& b) {
  std::uint64_t sse = 0;
  for (std::size_t i = 0; i < a.y.size(); ++i) {
    int d = static_cast<int>(a.y[i]) - static_cast<int>(b.y[i]);
    sse += static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
  }
  return static_cast<double>(sse) / static_cast<double>(a.y.size());
}

}  // namespace detail

inline double psnr(const Frame& a, const Frame& b) {
  if (!a.same_geometry(b)) throw DimensionError("psnr needs equal geometry");
  return psnr_from_mse(detail::luma_mse_sum(a, b));
}

inline double psnr(const Sequence& a, const Sequence& b) {
  if (a.frames.size() != b.frames.size() || a.empty())
    throw DimensionError("sequences must be non-empty and equally long");
  double mse = 0.0;
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    if (!a.frames[i].same_geometry(b.frames[i]))
      throw DimensionError("psnr needs equal geometry");
    mse += detail::luma_mse_sum(a.frames[i], b.frames[i]);
  }
  return psnr_from_mse(mse / static_cast<double>(a.frames.size()));
}

namespace detail {

// Least-squares cubic fit of y over x, centered for conditioning.
struct Cubic {
  double c[4] = {0, 0, 0, 0};  // coefficients in (x - shift)
  double shift = 0.0;

  double integral(double lo, double hi) const {
    auto prim = [&](double x) {
      double u = x - shift;
      return c[0] * u + c[1] * u * u / 2.0 + c[2] * u * u * u / 3.0 +
             c[3] * u * u * u * u / 4.0;
    };
    return prim(hi) - prim(lo);
  }
};

inline Cubic fit_cubic(const std::vector<double>& x, const std::vector<double>& y) {
  Cubic fit;
  double shift = 0.0;
  for (double v : x) shift += v;
  shift /= static_cast<double>(x.size());
  fit.shift = shift;

  double a[4][5] = {};
  for (std::size_t i = 0; i < x.size(); ++i) {
    double u = x[i] - shift;
    double pw[7];
    pw[0] = 1.0;
    for (int k = 1; k < 7; ++k) pw[k] = pw[k - 1] * u;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) a[r][c] += pw[r + c];
      a[r][4] += pw[r] * y[i];
    }
  }
  // Gaussian elimination with partial pivoting on the 4x5 system.
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    for (int c = 0; c < 5; ++c) std::swap(a[piv][c], a[col][c]);
    if (a[col][col] == 0.0) throw ConfigError("degenerate rate-distortion curve");
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (int r = 0; r < 4; ++r) fit.c[r] = a[r][4] / a[r][r];
  return fit;
}

inline void prepare_curve(std::vector<RdPoint> pts, std::vector<double>& q,
                          std::vector<double>& logr) {
  if (pts.size() < 4) throw ConfigError("BD-rate needs at least 4 points per curve");
  std::sort(pts.begin(), pts.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.quality_db < b.quality_db; });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].rate <= 0.0) throw RangeError("rates must be positive");
    if (i > 0 && pts[i].quality_db <= pts[i - 1].quality_db)
      throw ConfigError("curve qualities must be strictly increasing");
    q.push_back(pts[i].quality_db);
    logr.push_back(std::log10(pts[i].rate));
  }
}

}  // namespace detail

// Bjontegaard delta rate: cubic fits of log10(rate) over quality, integrated
// across the overlapping quality interval. Negative means the test curve
// needs less rate at equal quality.
inline double bd_rate(const std::vector<RdPoint>& anchor,
                      const std::vector<RdPoint>& test) {
  std::vector<double> qa, ra, qt, rt;
  detail::prepare_curve(anchor, qa, ra);
  detail::prepare_curve(test, qt, rt);
  double lo = std::max(qa.front(), qt.front());
  double hi = std::min(qa.back(), qt.back());
  if (hi <= lo) throw OverlapError("rate-distortion curves do not overlap in quality");
  detail::Cubic fa = detail::fit_cubic(qa, ra);
  detail::Cubic ft = detail::fit_cubic(qt, rt);
  double avg_diff = (ft.integral(lo, hi) - fa.integral(lo, hi)) / (hi - lo);
  return (std::pow(10.0, avg_diff) - 1.0) * 100.0;
}

}  // namespace rdv
