#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "rdv/errors.hpp"
#include "rdv/frame.hpp"
#include "rdv/numeric.hpp"
#include "rdv/range_coder.hpp"

namespace rdv {

constexpr int kBlockSize = 16;
constexpr int kSearchRange = 16;

struct MotionVector {
  std::int16_t dx = 0;
  std::int16_t dy = 0;
  bool operator==(const MotionVector&) const = default;
};

// Per-block motion toward up to two references plus the bidirectional weight.
// beta_half holds the weight on the past prediction in halves: 2 -> past
// only, 1 -> equal blend, 0 -> future only. P frames imply beta_half == 2 and
// carry no future data.
struct MotionField {
  int blocks_x = 0;
  int blocks_y = 0;
  std::vector<MotionVector> mv_past;
  std::vector<MotionVector> mv_future;  // empty without a future reference
  std::vector<std::uint8_t> beta_half;  // empty without a future reference

  bool bidirectional() const { return !mv_future.empty(); }
  int block_count() const { return blocks_x * blocks_y; }
  int block_index(int bx, int by) const { return by * blocks_x + bx; }
};

namespace detail {

inline int blocks_in(int dim) { return (dim + kBlockSize - 1) / kBlockSize; }

inline int median3(int a, int b, int c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

// Prediction sample for one luma position given a block's motion data.
// Reads are clamped to the reference frame.
inline int predict_luma(const Frame& past, const Frame* future, int x, int y,
                        const MotionVector& vp, const MotionVector& vf,
                        int beta_half) {
  int a = beta_half > 0 ? past.at_clamped(0, x + vp.dx, y + vp.dy) : 0;
  if (beta_half == 2) return a;
  int b = future->at_clamped(0, x + vf.dx, y + vf.dy);
  if (beta_half == 0) return b;
  return avg_round_half_even(a, b);
}

struct SearchOrder {
  // (0,0) first, then raster; the comparator below makes the result
  // independent of visit order anyway.
  static int raster_index(int dx, int dy) {
    return (dy + kSearchRange) * (2 * kSearchRange + 1) + (dx + kSearchRange);
  }
};

// Preference key used to break SAD ties: the zero vector wins, then the
// shortest L1 length, then raster position in the search window.
inline std::uint32_t tie_key(int dx, int dy) {
  std::uint32_t zero = (dx == 0 && dy == 0) ? 0u : 1u;
  std::uint32_t l1 = static_cast<std::uint32_t>(std::abs(dx) + std::abs(dy));
  std::uint32_t raster = static_cast<std::uint32_t>(SearchOrder::raster_index(dx, dy));
  return (zero << 18) | (l1 << 11) | raster;
}

// Full-search SAD over the +-16 window for one block of the luma plane.
inline MotionVector search_block(const Frame& target, const Frame& ref, int x0,
                                 int y0, int bw, int bh) {
  const std::uint8_t* tgt = target.y.data();
  int tw = target.width;
  std::uint64_t best_sad = ~0ull;
  std::uint32_t best_key = ~0u;
  MotionVector best;
  for (int dy = -kSearchRange; dy <= kSearchRange; ++dy) {
    for (int dx = -kSearchRange; dx <= kSearchRange; ++dx) {
      std::uint64_t sad = 0;
      for (int y = 0; y < bh; ++y) {
        int ty = y0 + y;
        const std::uint8_t* trow = tgt + static_cast<std::size_t>(ty) * tw;
        for (int x = 0; x < bw; ++x) {
          int tx = x0 + x;
          int r = ref.at_clamped(0, tx + dx, ty + dy);
          sad += static_cast<std::uint64_t>(std::abs(trow[tx] - r));
        }
        if (sad > best_sad) break;  // cannot win, not even on a tie
      }
      std::uint32_t key = tie_key(dx, dy);
      if (sad < best_sad || (sad == best_sad && key < best_key)) {
        best_sad = sad;
        best_key = key;
        best = {static_cast<std::int16_t>(dx), static_cast<std::int16_t>(dy)};
      }
    }
  }
  return best;
}

}  // namespace detail

// Full-search block matching toward the past reference and, when present, the
// future one; the blend weight per block is whichever of {1, 1/2, 0} gives
// the lowest luma SAD, evaluated with the exact compensation arithmetic.
inline MotionField estimate_motion(const Frame& target, const Frame& ref_past,
                                   const Frame* ref_future = nullptr) {
  if (!target.same_geometry(ref_past) ||
      (ref_future && !target.same_geometry(*ref_future)))
    throw DimensionError("motion estimation needs matching geometries");

  MotionField field;
  field.blocks_x = detail::blocks_in(target.width);
  field.blocks_y = detail::blocks_in(target.height);
  field.mv_past.resize(static_cast<std::size_t>(field.block_count()));
  if (ref_future) {
    field.mv_future.resize(static_cast<std::size_t>(field.block_count()));
    field.beta_half.assign(static_cast<std::size_t>(field.block_count()), 2);
  }

  for (int by = 0; by < field.blocks_y; ++by) {
    for (int bx = 0; bx < field.blocks_x; ++bx) {
      int x0 = bx * kBlockSize;
      int y0 = by * kBlockSize;
      int bw = std::min(kBlockSize, target.width - x0);
      int bh = std::min(kBlockSize, target.height - y0);
      int b = field.block_index(bx, by);
      field.mv_past[b] = detail::search_block(target, ref_past, x0, y0, bw, bh);
      if (!ref_future) continue;
      field.mv_future[b] =
          detail::search_block(target, *ref_future, x0, y0, bw, bh);

      std::uint64_t best_sad = ~0ull;
      int best_beta = 2;
      for (int beta : {2, 1, 0}) {
        std::uint64_t sad = 0;
        for (int y = y0; y < y0 + bh; ++y)
          for (int x = x0; x < x0 + bw; ++x) {
            int p = detail::predict_luma(ref_past, ref_future, x, y,
                                         field.mv_past[b], field.mv_future[b],
                                         beta);
            sad += static_cast<std::uint64_t>(std::abs(target.at(0, x, y) - p));
          }
        if (sad < best_sad) {
          best_sad = sad;
          best_beta = beta;
        }
      }
      field.beta_half[b] = static_cast<std::uint8_t>(best_beta);
    }
  }
  return field;
}

// Builds the motion-compensated prediction. Chroma uses the block vector
// halved with ties away from zero; all blends round halves to even.
inline Frame compensate(const MotionField& field, const Frame& ref_past,
                        const Frame* ref_future = nullptr) {
  if (field.bidirectional() != (ref_future != nullptr))
    throw DimensionError("motion field / reference count mismatch");
  Frame out(ref_past.width, ref_past.height);
  for (int p = 0; p < 3; ++p) {
    int w = out.plane_width(p), h = out.plane_height(p);
    int shift = p == 0 ? 0 : 1;  // chroma block grid is half-pitch
    std::uint8_t* dst = out.plane(p).data();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        int bx = std::min((x << shift) / kBlockSize, field.blocks_x - 1);
        int by = std::min((y << shift) / kBlockSize, field.blocks_y - 1);
        int b = field.block_index(bx, by);
        MotionVector vp = field.mv_past[b];
        int beta = field.bidirectional() ? field.beta_half[b] : 2;
        int px = 0;
        if (p != 0) {
          vp = {static_cast<std::int16_t>(div2_round_half_away(vp.dx)),
                static_cast<std::int16_t>(div2_round_half_away(vp.dy))};
        }
        int a = beta > 0 ? ref_past.at_clamped(p, x + vp.dx, y + vp.dy) : 0;
        if (beta == 2) {
          px = a;
        } else {
          MotionVector vf = field.mv_future[b];
          if (p != 0) {
            vf = {static_cast<std::int16_t>(div2_round_half_away(vf.dx)),
                  static_cast<std::int16_t>(div2_round_half_away(vf.dy))};
          }
          int bsample = ref_future->at_clamped(p, x + vf.dx, y + vf.dy);
          px = beta == 0 ? bsample : avg_round_half_even(a, bsample);
        }
        dst[static_cast<std::size_t>(y) * w + x] = static_cast<std::uint8_t>(px);
      }
    }
  }
  return out;
}

// Context set for motion data: exp-Golomb prefix ladders per reference list
// and component, plus the two-node tree for the blend weight.
struct MotionContexts {
  BinaryContext mv_prefix[2][2][6];
  BinaryContext beta[2];
};

namespace detail {

inline MotionVector median_predictor(const MotionField& field,
                                     const std::vector<MotionVector>& mvs,
                                     int bx, int by) {
  auto fetch = [&](int nx, int ny) -> MotionVector {
    if (nx < 0 || ny < 0 || nx >= field.blocks_x) return {0, 0};
    return mvs[static_cast<std::size_t>(field.block_index(nx, ny))];
  };
  MotionVector left = fetch(bx - 1, by);
  MotionVector top = fetch(bx, by - 1);
  MotionVector topright = fetch(bx + 1, by - 1);
  return {static_cast<std::int16_t>(median3(left.dx, top.dx, topright.dx)),
          static_cast<std::int16_t>(median3(left.dy, top.dy, topright.dy))};
}

}  // namespace detail

// Predictive coding of a motion field: vector residuals against the
// left/top/top-right median as signed exp-Golomb, the blend weight as a
// two-bit tree (1 -> "0", 1/2 -> "10", 0 -> "11").
template <class Coder>
void encode_motion(Coder& coder, MotionContexts& ctx, const MotionField& field) {
  for (int by = 0; by < field.blocks_y; ++by) {
    for (int bx = 0; bx < field.blocks_x; ++bx) {
      int b = field.block_index(bx, by);
      for (int list = 0; list < (field.bidirectional() ? 2 : 1); ++list) {
        const auto& mvs = list == 0 ? field.mv_past : field.mv_future;
        MotionVector pred = detail::median_predictor(field, mvs, bx, by);
        encode_seg0(coder, ctx.mv_prefix[list][0], 6, mvs[b].dx - pred.dx);
        encode_seg0(coder, ctx.mv_prefix[list][1], 6, mvs[b].dy - pred.dy);
      }
      if (field.bidirectional()) {
        int beta = field.beta_half[b];
        coder.encode_bit(ctx.beta[0], beta != 2);
        if (beta != 2) coder.encode_bit(ctx.beta[1], beta == 0);
      }
    }
  }
}

inline MotionField decode_motion(RangeDecoder& dec, MotionContexts& ctx,
                                 int width, int height, bool bidirectional) {
  MotionField field;
  field.blocks_x = detail::blocks_in(width);
  field.blocks_y = detail::blocks_in(height);
  field.mv_past.resize(static_cast<std::size_t>(field.block_count()));
  if (bidirectional) {
    field.mv_future.resize(static_cast<std::size_t>(field.block_count()));
    field.beta_half.assign(static_cast<std::size_t>(field.block_count()), 2);
  }
  for (int by = 0; by < field.blocks_y; ++by) {
    for (int bx = 0; bx < field.blocks_x; ++bx) {
      int b = field.block_index(bx, by);
      for (int list = 0; list < (bidirectional ? 2 : 1); ++list) {
        auto& mvs = list == 0 ? field.mv_past : field.mv_future;
        MotionVector pred = detail::median_predictor(field, mvs, bx, by);
        int dx = pred.dx + decode_seg0(dec, ctx.mv_prefix[list][0], 6);
        int dy = pred.dy + decode_seg0(dec, ctx.mv_prefix[list][1], 6);
        if (std::abs(dx) > kSearchRange || std::abs(dy) > kSearchRange)
          throw BitstreamError("motion vector outside search range");
        mvs[b] = {static_cast<std::int16_t>(dx), static_cast<std::int16_t>(dy)};
      }
      if (bidirectional) {
        if (dec.decode_bit(ctx.beta[0]) == 0)
          field.beta_half[b] = 2;
        else
          field.beta_half[b] = dec.decode_bit(ctx.beta[1]) ? 0 : 1;
      }
    }
  }
  return field;
}

}  // namespace rdv
