#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rdv/errors.hpp"

namespace rdv {

struct Rational {
  std::uint32_t num = 25;
  std::uint32_t den = 1;
};

inline int chroma_dim(int d) { return (d + 1) / 2; }

// One 8-bit 4:2:0 picture: full-resolution luma plus two half-resolution
// chroma planes. Plane sizes are fixed by the geometry.
struct Frame {
  int width = 0;
  int height = 0;
  int display_index = 0;
  std::vector<std::uint8_t> y;
  std::vector<std::uint8_t> cb;
  std::vector<std::uint8_t> cr;

  Frame() = default;
  Frame(int w, int h, int index = 0, std::uint8_t fill = 128)
      : width(w),
        height(h),
        display_index(index),
        y(static_cast<std::size_t>(w) * h, fill),
        cb(static_cast<std::size_t>(chroma_dim(w)) * chroma_dim(h), fill),
        cr(static_cast<std::size_t>(chroma_dim(w)) * chroma_dim(h), fill) {}

  int chroma_width() const { return chroma_dim(width); }
  int chroma_height() const { return chroma_dim(height); }

  int plane_width(int p) const { return p == 0 ? width : chroma_width(); }
  int plane_height(int p) const { return p == 0 ? height : chroma_height(); }

  std::vector<std::uint8_t>& plane(int p) { return p == 0 ? y : (p == 1 ? cb : cr); }
  const std::vector<std::uint8_t>& plane(int p) const {
    return p == 0 ? y : (p == 1 ? cb : cr);
  }

  std::uint8_t at(int p, int x, int y_pos) const {
    return plane(p)[static_cast<std::size_t>(y_pos) * plane_width(p) + x];
  }
  void set(int p, int x, int y_pos, std::uint8_t v) {
    plane(p)[static_cast<std::size_t>(y_pos) * plane_width(p) + x] = v;
  }

  // Clamped read: coordinates outside the plane are replicated from the edge.
  std::uint8_t at_clamped(int p, int x, int y_pos) const {
    int w = plane_width(p), h = plane_height(p);
    x = x < 0 ? 0 : (x >= w ? w - 1 : x);
    y_pos = y_pos < 0 ? 0 : (y_pos >= h ? h - 1 : y_pos);
    return at(p, x, y_pos);
  }

  bool same_geometry(const Frame& o) const {
    return width == o.width && height == o.height;
  }

  bool same_samples(const Frame& o) const {
    return same_geometry(o) && y == o.y && cb == o.cb && cr == o.cr;
  }

  void validate() const {
    if (width <= 0 || height <= 0)
      throw DimensionError("frame has empty geometry");
    if (y.size() != static_cast<std::size_t>(width) * height)
      throw DimensionError("luma plane size does not match geometry");
    std::size_t c = static_cast<std::size_t>(chroma_width()) * chroma_height();
    if (cb.size() != c || cr.size() != c)
      throw DimensionError("chroma plane size does not match geometry");
  }
};

struct Sequence {
  std::vector<Frame> frames;
  Rational fps;
  std::string name;

  bool empty() const { return frames.empty(); }
  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }

  double duration_seconds() const {
    if (fps.num == 0) return 0.0;
    return static_cast<double>(frames.size()) * fps.den / fps.num;
  }

  void validate() const {
    for (std::size_t i = 0; i < frames.size(); ++i) {
      frames[i].validate();
      if (!frames[i].same_geometry(frames.front()))
        throw DimensionError("sequence frames disagree on geometry");
      if (frames[i].display_index != static_cast<int>(i))
        throw DimensionError("display_index not contiguous from zero");
    }
  }
};

}  // namespace rdv
