#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "rdv/errors.hpp"
#include "rdv/frame.hpp"
#include "rdv/motion.hpp"
#include "rdv/numeric.hpp"
#include "rdv/range_coder.hpp"
#include "rdv/schedule.hpp"
#include "rdv/transform.hpp"

namespace rdv {

// Per-block arbitration between copying the prediction outright and coding a
// quantized residual on top of it.
enum class BlockMode : std::uint8_t { Skip, Coded };

struct ModeMap {
  int blocks_x = 0;
  int blocks_y = 0;
  std::vector<BlockMode> modes;
};

struct FrameStats {
  double r_motion = 0.0;    // measured motion bits
  double r_residual = 0.0;  // measured mode + residual bits
  double mse = 0.0;         // luma MSE of the reconstruction
  FrameType frame_type = FrameType::I;
};

// Adaptive contexts for one frame. Sessions are per frame: every frame starts
// from this neutral state, so payloads stay independently decodable.
struct CodecContexts {
  MotionContexts motion;
  BinaryContext alpha;             // 1 = coded, 0 = skip
  BinaryContext sig[2][4];         // [luma/chroma][zigzag bucket]
  BinaryContext mag_prefix[2][6];  // [luma/chroma][prefix rung]
};

namespace detail {

inline constexpr int kZigzag[64] = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

inline int sig_bucket(int scan_pos) {
  if (scan_pos == 0) return 0;
  if (scan_pos < 4) return 1;
  if (scan_pos < 16) return 2;
  return 3;
}

// Significance flag per scan position; significant coefficients carry a
// bypass sign and an exp-Golomb magnitude.
template <class Coder>
void encode_unit(Coder& coder, CodecContexts& ctx, int plane_class,
                 const std::int32_t levels[64]) {
  for (int i = 0; i < 64; ++i) {
    std::int32_t lv = levels[kZigzag[i]];
    int sig = lv != 0;
    coder.encode_bit(ctx.sig[plane_class][sig_bucket(i)], sig);
    if (sig) {
      coder.encode_bypass(lv < 0 ? 1u : 0u, 1);
      encode_ueg0(coder, ctx.mag_prefix[plane_class], 6,
                  static_cast<std::uint32_t>(std::abs(lv)) - 1u);
    }
  }
}

inline void decode_unit(RangeDecoder& dec, CodecContexts& ctx, int plane_class,
                        std::int32_t levels[64]) {
  for (int i = 0; i < 64; ++i) {
    std::int32_t lv = 0;
    if (dec.decode_bit(ctx.sig[plane_class][sig_bucket(i)])) {
      int negative = static_cast<int>(dec.decode_bypass(1));
      std::uint32_t mag = decode_ueg0(dec, ctx.mag_prefix[plane_class], 6) + 1u;
      if (mag > (1u << 20)) throw BitstreamError("residual level out of range");
      lv = negative ? -static_cast<std::int32_t>(mag)
                    : static_cast<std::int32_t>(mag);
    }
    levels[kZigzag[i]] = lv;
  }
}

// One 8x8 transform unit: (plane, origin). Units are laid out on a fixed
// grid per 16x16 block: four luma, one Cb, one Cr.
struct UnitLayout {
  int plane;
  int x0;
  int y0;
};

inline void block_units(int bx, int by, UnitLayout out[6]) {
  int lx = bx * kBlockSize, ly = by * kBlockSize;
  out[0] = {0, lx, ly};
  out[1] = {0, lx + 8, ly};
  out[2] = {0, lx, ly + 8};
  out[3] = {0, lx + 8, ly + 8};
  out[4] = {1, bx * 8, by * 8};
  out[5] = {2, bx * 8, by * 8};
}

// Residual of one unit, zero-padded outside the plane.
inline void gather_residual(const Frame& target, const Frame& pred,
                            const UnitLayout& u, double res[64]) {
  int w = target.plane_width(u.plane), h = target.plane_height(u.plane);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      int px = u.x0 + x, py = u.y0 + y;
      res[y * 8 + x] =
          (px < w && py < h)
              ? static_cast<double>(target.at(u.plane, px, py)) -
                    static_cast<double>(pred.at(u.plane, px, py))
              : 0.0;
    }
}

// prediction + rounded inverse-transform output, clamped to [0,255]. Writes
// only the samples that exist.
inline void scatter_reconstruction(Frame& recon, const Frame& pred,
                                   const UnitLayout& u, const double res[64]) {
  int w = recon.plane_width(u.plane), h = recon.plane_height(u.plane);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      int px = u.x0 + x, py = u.y0 + y;
      if (px >= w || py >= h) continue;
      int r = static_cast<int>(std::nearbyint(res[y * 8 + x]));
      recon.set(u.plane, px, py, clamp_u8(pred.at(u.plane, px, py) + r));
    }
}

struct CodedBlock {
  std::int32_t levels[6][64];
  double recon_res[6][64];  // dequantized + inverse transformed residual
};

inline void prepare_coded_block(const Frame& target, const Frame& pred,
                                const QualityLevel& q, int bx, int by,
                                CodedBlock& out) {
  UnitLayout units[6];
  block_units(bx, by, units);
  for (int u = 0; u < 6; ++u) {
    double res[64], coeffs[64];
    gather_residual(target, pred, units[u], res);
    dct8x8_forward(res, coeffs);
    quantize_block(coeffs, q, out.levels[u]);
    double deq[64];
    dequantize_block(out.levels[u], q, deq);
    dct8x8_inverse(deq, out.recon_res[u]);
  }
}

inline double luma_mse(const Frame& a, const Frame& b) {
  std::uint64_t sse = 0;
  for (std::size_t i = 0; i < a.y.size(); ++i) {
    int d = static_cast<int>(a.y[i]) - static_cast<int>(b.y[i]);
    sse += static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
  }
  return static_cast<double>(sse) / static_cast<double>(a.y.size());
}

}  // namespace detail

struct FrameEncodeOutput {
  Frame recon;
  FrameStats stats;
  ModeMap modes;
  MotionField motion;  // empty for I frames
};

// Closed-loop encode of one frame. refs must be the reconstructions of the
// schedule entry's references; I frames predict from flat mid-gray and code
// every block. For P/B blocks the Skip/coded choice minimizes
// SSE + lambda_mode * bits, with rates probed on a context snapshot so the
// trial leaves no trace in the coder state.
inline FrameEncodeOutput encode_frame(const Frame& target,
                                      const ScheduleEntry& entry,
                                      const Frame* ref_past,
                                      const Frame* ref_future,
                                      const QualityLevel& q,
                                      RangeEncoder& coder,
                                      CodecContexts& ctx) {
  bool intra = entry.frame_type == FrameType::I;
  bool bidir = entry.frame_type == FrameType::B;
  if (!intra && ref_past == nullptr)
    throw ScheduleInvariantError("inter frame without a past reference");
  if (bidir != (ref_future != nullptr))
    throw ScheduleInvariantError("reference count does not match frame type");

  FrameEncodeOutput out;
  Frame pred;
  std::uint64_t motion_cost0 = coder.cost_q16();
  if (intra) {
    pred = Frame(target.width, target.height, target.display_index, 128);
  } else {
    out.motion = estimate_motion(target, *ref_past, ref_future);
    encode_motion(coder, ctx.motion, out.motion);
    pred = compensate(out.motion, *ref_past, ref_future);
  }
  std::uint64_t motion_cost = coder.cost_q16() - motion_cost0;

  out.recon = pred;
  out.modes.blocks_x = detail::blocks_in(target.width);
  out.modes.blocks_y = detail::blocks_in(target.height);
  out.modes.modes.assign(
      static_cast<std::size_t>(out.modes.blocks_x * out.modes.blocks_y),
      BlockMode::Coded);

  for (int by = 0; by < out.modes.blocks_y; ++by) {
    for (int bx = 0; bx < out.modes.blocks_x; ++bx) {
      detail::CodedBlock cb;
      detail::prepare_coded_block(target, pred, q, bx, by, cb);

      bool use_coded = true;
      if (!intra) {
        // Trial rates on snapshots; distortions from the would-be
        // reconstruction, without materializing it.
        detail::UnitLayout units[6];
        detail::block_units(bx, by, units);
        std::uint64_t d_skip = 0, d_coded = 0;
        for (int u = 0; u < 6; ++u) {
          int w = target.plane_width(units[u].plane);
          int h = target.plane_height(units[u].plane);
          for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) {
              int px = units[u].x0 + x, py = units[u].y0 + y;
              if (px >= w || py >= h) continue;
              int t = target.at(units[u].plane, px, py);
              int pv = pred.at(units[u].plane, px, py);
              int r = static_cast<int>(std::nearbyint(cb.recon_res[u][y * 8 + x]));
              int cv = clamp_u8(pv + r);
              d_skip += static_cast<std::uint64_t>((t - pv) * (t - pv));
              d_coded += static_cast<std::uint64_t>((t - cv) * (t - cv));
            }
        }

        CodecContexts probe = ctx;
        CostEstimator skip_cost;
        skip_cost.encode_bit(probe.alpha, 0);

        CodecContexts probe2 = ctx;
        CostEstimator coded_cost;
        coded_cost.encode_bit(probe2.alpha, 1);
        for (int u = 0; u < 6; ++u)
          detail::encode_unit(coded_cost, probe2, units[u].plane == 0 ? 0 : 1,
                              cb.levels[u]);

        double j_skip = static_cast<double>(d_skip) +
                        q.lambda_mode * (static_cast<double>(skip_cost.cost_q16()) / 65536.0);
        double j_coded = static_cast<double>(d_coded) +
                         q.lambda_mode * (static_cast<double>(coded_cost.cost_q16()) / 65536.0);
        use_coded = j_coded < j_skip;
        coder.encode_bit(ctx.alpha, use_coded ? 1 : 0);
      }

      int b = out.modes.blocks_x * by + bx;
      out.modes.modes[static_cast<std::size_t>(b)] =
          use_coded ? BlockMode::Coded : BlockMode::Skip;
      if (use_coded) {
        detail::UnitLayout units[6];
        detail::block_units(bx, by, units);
        for (int u = 0; u < 6; ++u) {
          detail::encode_unit(coder, ctx, units[u].plane == 0 ? 0 : 1,
                              cb.levels[u]);
          detail::scatter_reconstruction(out.recon, pred, units[u],
                                         cb.recon_res[u]);
        }
      }
    }
  }

  out.stats.r_motion = static_cast<double>(motion_cost) / 65536.0;
  out.stats.r_residual =
      static_cast<double>(coder.cost_q16() - motion_cost0 - motion_cost) / 65536.0;
  out.stats.mse = detail::luma_mse(target, out.recon);
  out.stats.frame_type = entry.frame_type;
  return out;
}

// Exact mirror of encode_frame; produces the same reconstruction bit for bit.
inline Frame decode_frame(const ScheduleEntry& entry, int width, int height,
                          const Frame* ref_past, const Frame* ref_future,
                          const QualityLevel& q, RangeDecoder& dec,
                          CodecContexts& ctx) {
  bool intra = entry.frame_type == FrameType::I;
  bool bidir = entry.frame_type == FrameType::B;
  if (!intra && ref_past == nullptr)
    throw ScheduleInvariantError("inter frame without a past reference");
  if (bidir != (ref_future != nullptr))
    throw ScheduleInvariantError("reference count does not match frame type");

  Frame pred;
  if (intra) {
    pred = Frame(width, height, entry.display_index, 128);
  } else {
    MotionField field = decode_motion(dec, ctx.motion, width, height, bidir);
    pred = compensate(field, *ref_past, ref_future);
  }

  Frame recon = pred;
  recon.display_index = entry.display_index;
  int blocks_x = detail::blocks_in(width);
  int blocks_y = detail::blocks_in(height);
  for (int by = 0; by < blocks_y; ++by) {
    for (int bx = 0; bx < blocks_x; ++bx) {
      bool coded = intra ? true : dec.decode_bit(ctx.alpha) != 0;
      if (!coded) continue;
      detail::UnitLayout units[6];
      detail::block_units(bx, by, units);
      for (int u = 0; u < 6; ++u) {
        std::int32_t levels[64];
        detail::decode_unit(dec, ctx, units[u].plane == 0 ? 0 : 1, levels);
        double deq[64], res[64];
        dequantize_block(levels, q, deq);
        dct8x8_inverse(deq, res);
        detail::scatter_reconstruction(recon, pred, units[u], res);
      }
    }
  }
  return recon;
}

}  // namespace rdv
