#pragma once

#include <cstdint>
#include <vector>

#include "rdv/errors.hpp"
#include "rdv/frame.hpp"
#include "rdv/numeric.hpp"

namespace rdv {

namespace detail {

inline std::uint8_t plane_at_clamped(const std::vector<std::uint8_t>& p, int w,
                                     int h, int x, int y) {
  x = x < 0 ? 0 : (x >= w ? w - 1 : x);
  y = y < 0 ? 0 : (y >= h ? h - 1 : y);
  return p[static_cast<std::size_t>(y) * w + x];
}

// 2x2 mean with replicated borders, ties to even.
inline std::vector<std::uint8_t> plane_down2(const std::vector<std::uint8_t>& src,
                                             int sw, int sh, int dw, int dh) {
  std::vector<std::uint8_t> dst(static_cast<std::size_t>(dw) * dh);
  for (int y = 0; y < dh; ++y) {
    for (int x = 0; x < dw; ++x) {
      int sum = plane_at_clamped(src, sw, sh, 2 * x, 2 * y) +
                plane_at_clamped(src, sw, sh, 2 * x + 1, 2 * y) +
                plane_at_clamped(src, sw, sh, 2 * x, 2 * y + 1) +
                plane_at_clamped(src, sw, sh, 2 * x + 1, 2 * y + 1);
      dst[static_cast<std::size_t>(y) * dw + x] =
          static_cast<std::uint8_t>(div_round_half_even(sum, 4));
    }
  }
  return dst;
}

// Bilinear interpolation onto (dw, dh) with centre-aligned sampling and
// replicated borders. All arithmetic is exact 64-bit integer work so the
// result is identical on every platform.
inline std::vector<std::uint8_t> plane_bilinear(const std::vector<std::uint8_t>& src,
                                                int sw, int sh, int dw, int dh) {
  std::vector<std::uint8_t> dst(static_cast<std::size_t>(dw) * dh);
  // Source position of output pixel i is (2i+1)*s/(2d) - 1/2, expressed as a
  // rational with denominator 2d.
  auto axis = [](int i, int s, int d, std::int64_t& x0, std::int64_t& fnum,
                 std::int64_t& fden) {
    std::int64_t num = static_cast<std::int64_t>(2 * i + 1) * s - d;  // over 2d
    std::int64_t den = 2 * d;
    if (num <= 0) {
      x0 = 0;
      fnum = 0;
      fden = 1;
      return;
    }
    x0 = num / den;
    fnum = num % den;
    fden = den;
    if (x0 >= s - 1) {
      x0 = s - 1;
      fnum = 0;
      fden = 1;
    }
  };
  for (int y = 0; y < dh; ++y) {
    std::int64_t y0, fy, fyd;
    axis(y, sh, dh, y0, fy, fyd);
    int y1 = y0 + 1 < sh ? static_cast<int>(y0) + 1 : static_cast<int>(y0);
    for (int x = 0; x < dw; ++x) {
      std::int64_t x0, fx, fxd;
      axis(x, sw, dw, x0, fx, fxd);
      int x1 = x0 + 1 < sw ? static_cast<int>(x0) + 1 : static_cast<int>(x0);
      std::int64_t a = src[static_cast<std::size_t>(y0) * sw + x0];
      std::int64_t b = src[static_cast<std::size_t>(y0) * sw + x1];
      std::int64_t c = src[static_cast<std::size_t>(y1) * sw + x0];
      std::int64_t d = src[static_cast<std::size_t>(y1) * sw + x1];
      std::int64_t num = (fxd - fx) * (fyd - fy) * a + fx * (fyd - fy) * b +
                         (fxd - fx) * fy * c + fx * fy * d;
      dst[static_cast<std::size_t>(y) * dw + x] = static_cast<std::uint8_t>(
          div_round_half_even(num, fxd * fyd));
    }
  }
  return dst;
}

}  // namespace detail

// Halves each dimension (flooring) with a 2x2 mean kernel.
inline Frame downsample2x(const Frame& frame) {
  frame.validate();
  if (frame.width < 2 || frame.height < 2)
    throw DimensionError("downsample2x needs at least 2x2 input");
  Frame out(frame.width / 2, frame.height / 2, frame.display_index);
  out.y = detail::plane_down2(frame.y, frame.width, frame.height, out.width,
                              out.height);
  out.cb = detail::plane_down2(frame.cb, frame.chroma_width(),
                               frame.chroma_height(), out.chroma_width(),
                               out.chroma_height());
  out.cr = detail::plane_down2(frame.cr, frame.chroma_width(),
                               frame.chroma_height(), out.chroma_width(),
                               out.chroma_height());
  return out;
}

// Bilinear upsampling to (target_w, target_h), which must be 2w or 2w+1 per axis.
inline Frame upsample2x(const Frame& frame, int target_w, int target_h) {
  frame.validate();
  if (target_w != 2 * frame.width && target_w != 2 * frame.width + 1)
    throw DimensionError("target width must be 2w or 2w+1");
  if (target_h != 2 * frame.height && target_h != 2 * frame.height + 1)
    throw DimensionError("target height must be 2h or 2h+1");
  Frame out(target_w, target_h, frame.display_index);
  out.y = detail::plane_bilinear(frame.y, frame.width, frame.height, target_w,
                                 target_h);
  out.cb = detail::plane_bilinear(frame.cb, frame.chroma_width(),
                                  frame.chroma_height(), out.chroma_width(),
                                  out.chroma_height());
  out.cr = detail::plane_bilinear(frame.cr, frame.chroma_width(),
                                  frame.chroma_height(), out.chroma_width(),
                                  out.chroma_height());
  return out;
}

}  // namespace rdv
