#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "rdv/errors.hpp"

namespace rdv {

// Adaptive binary probability model. The coded probability lives on a 12-bit
// grid and never saturates: prob stays in [1, 4095]. The estimate itself is
// a smoothed observation count, halved once 2048 events have been seen, so a
// context adapts fast when young and settles near the source statistics
// afterwards. Integer arithmetic only.
struct BinaryContext {
  std::uint16_t prob = 2048;  // P(bit == 1) in 1/4096 units
  std::uint16_t count_one = 0;
  std::uint16_t count_total = 0;

  static constexpr unsigned kRescaleAt = 2048;

  void update(int bit) {
    count_one = static_cast<std::uint16_t>(count_one + (bit & 1));
    ++count_total;
    if (count_total >= kRescaleAt) {
      count_one = static_cast<std::uint16_t>((count_one + 1) >> 1);
      count_total = static_cast<std::uint16_t>((count_total + 1) >> 1);
    }
    std::uint32_t p = (4096u * (2u * count_one + 1u)) / (2u * (count_total + 1u));
    if (p < 1) p = 1;
    if (p > 4095) p = 4095;
    prob = static_cast<std::uint16_t>(p);
  }
};

namespace detail {

// -log2(p/4096) in Q16, computed with integer squaring only so the cost
// accounting is identical on every platform.
inline std::uint32_t neg_log2_q16(std::uint32_t p) {
  std::uint32_t exponent = 0;
  std::uint64_t x = p;
  while (x < 4096) {
    x <<= 1;
    ++exponent;
  }
  std::uint64_t v = x << 4;  // Q16, in [1, 2)
  std::uint32_t frac = 0;
  for (int i = 0; i < 16; ++i) {
    v = (v * v) >> 16;
    frac <<= 1;
    if (v >= (2ull << 16)) {
      v >>= 1;
      frac |= 1;
    }
  }
  return (exponent << 16) - frac;
}

inline const std::array<std::uint32_t, 4096>& bit_cost_table() {
  static const std::array<std::uint32_t, 4096> table = [] {
    std::array<std::uint32_t, 4096> t{};
    for (std::uint32_t p = 1; p < 4096; ++p) t[p] = neg_log2_q16(p);
    return t;
  }();
  return table;
}

}  // namespace detail

// Cost in Q16 bits of coding `bit` against `ctx`, without coding anything.
inline std::uint64_t bit_cost_q16(const BinaryContext& ctx, int bit) {
  return detail::bit_cost_table()[bit ? ctx.prob : 4096u - ctx.prob];
}

// 32-bit binary range encoder with byte-wise renormalization. Carries are
// resolved through a pending-0xFF cache, LZMA style. The first emitted byte
// is always zero; the decoder checks it. Encoding nothing emits nothing.
class RangeEncoder {
 public:
  void encode_bit(BinaryContext& ctx, int bit) {
    started_ = true;
    cost_q16_ += bit_cost_q16(ctx, bit);
    std::uint32_t bound = (range_ >> 12) * ctx.prob;
    if (bit) {
      range_ = bound;
    } else {
      low_ += bound;
      range_ -= bound;
    }
    ctx.update(bit);
    while (range_ < kTop) {
      range_ <<= 8;
      shift_low();
    }
  }

  // Fixed half-probability bits, most significant first. No context update.
  void encode_bypass(std::uint32_t value, int width) {
    for (int i = width - 1; i >= 0; --i) {
      started_ = true;
      range_ >>= 1;
      if ((value >> i) & 1u) low_ += range_;
      while (range_ < kTop) {
        range_ <<= 8;
        shift_low();
      }
    }
    cost_q16_ += static_cast<std::uint64_t>(width) << 16;
  }

  // Flushes the registers. At most 5 bytes; nothing at all if no symbol was
  // ever coded.
  void finish() {
    if (!started_ || finished_) {
      finished_ = true;
      return;
    }
    finished_ = true;
    for (int i = 0; i < 5; ++i) shift_low();
  }

  const std::vector<std::uint8_t>& bytes() const { return out_; }
  std::vector<std::uint8_t> take_bytes() { return std::move(out_); }

  // Measured information content of everything coded so far, in Q16 bits.
  std::uint64_t cost_q16() const { return cost_q16_; }

 private:
  static constexpr std::uint32_t kTop = 1u << 24;

  void shift_low() {
    if (static_cast<std::uint32_t>(low_ >> 32) != 0 ||
        static_cast<std::uint32_t>(low_) < 0xFF000000u) {
      std::uint8_t carry = static_cast<std::uint8_t>(low_ >> 32);
      out_.push_back(static_cast<std::uint8_t>(cache_ + carry));
      for (; pending_ > 1; --pending_)
        out_.push_back(static_cast<std::uint8_t>(0xFFu + carry));
      cache_ = static_cast<std::uint8_t>(low_ >> 24);
    }
    ++pending_;
    low_ = (low_ & 0x00FFFFFFull) << 8;
  }

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t pending_ = 1;
  bool started_ = false;
  bool finished_ = false;
  std::uint64_t cost_q16_ = 0;
  std::vector<std::uint8_t> out_;
};

// Mirror of RangeEncoder. Registers are filled lazily so that opening a
// session over an empty payload only fails once a symbol is actually read.
class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> payload) : in_(payload) {}

  int decode_bit(BinaryContext& ctx) {
    ensure_init();
    std::uint32_t bound = (range_ >> 12) * ctx.prob;
    int bit;
    if (code_ < bound) {
      bit = 1;
      range_ = bound;
    } else {
      bit = 0;
      code_ -= bound;
      range_ -= bound;
    }
    ctx.update(bit);
    while (range_ < kTop) {
      range_ <<= 8;
      code_ = (code_ << 8) | read_byte();
    }
    return bit;
  }

  std::uint32_t decode_bypass(int width) {
    if (width == 0) return 0;
    ensure_init();
    std::uint32_t value = 0;
    for (int i = 0; i < width; ++i) {
      range_ >>= 1;
      std::uint32_t bit = code_ >= range_ ? 1u : 0u;
      if (bit) code_ -= range_;
      value = (value << 1) | bit;
      while (range_ < kTop) {
        range_ <<= 8;
        code_ = (code_ << 8) | read_byte();
      }
    }
    return value;
  }

  std::size_t bytes_consumed() const { return pos_; }

 private:
  static constexpr std::uint32_t kTop = 1u << 24;

  std::uint8_t read_byte() {
    if (pos_ >= in_.size()) throw BitstreamError("coded payload exhausted");
    return in_[pos_++];
  }

  void ensure_init() {
    if (initialized_) return;
    initialized_ = true;
    if (read_byte() != 0) throw BitstreamError("corrupt payload lead byte");
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | read_byte();
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
  bool initialized_ = false;
};

// Context-state walker that accumulates the cost a real encode would pay,
// without emitting bytes. Used for side-effect-free trial encodes: run it on
// a snapshot of the contexts, read cost_q16, throw the snapshot away.
class CostEstimator {
 public:
  void encode_bit(BinaryContext& ctx, int bit) {
    cost_q16_ += bit_cost_q16(ctx, bit);
    ctx.update(bit);
  }
  void encode_bypass(std::uint32_t, int width) {
    cost_q16_ += static_cast<std::uint64_t>(width) << 16;
  }
  std::uint64_t cost_q16() const { return cost_q16_; }

 private:
  std::uint64_t cost_q16_ = 0;
};

inline std::uint32_t signed_to_unsigned(std::int32_t s) {
  return s > 0 ? 2u * static_cast<std::uint32_t>(s) - 1u
               : 2u * static_cast<std::uint32_t>(-s);
}

inline std::int32_t unsigned_to_signed(std::uint32_t u) {
  return (u & 1u) ? static_cast<std::int32_t>((u + 1u) >> 1)
                  : -static_cast<std::int32_t>(u >> 1);
}

// Order-0 exp-Golomb: unary prefix through a small context ladder, suffix in
// bypass. Values up to 2^30 - 2.
template <class Coder>
void encode_ueg0(Coder& coder, BinaryContext* prefix_ctx, int n_ctx,
                 std::uint32_t value) {
  std::uint32_t m = value + 1;
  int prefix = 31 - std::countl_zero(m);
  for (int k = 0; k < prefix; ++k)
    coder.encode_bit(prefix_ctx[k < n_ctx ? k : n_ctx - 1], 1);
  coder.encode_bit(prefix_ctx[prefix < n_ctx ? prefix : n_ctx - 1], 0);
  if (prefix > 0) coder.encode_bypass(m & ((1u << prefix) - 1u), prefix);
}

inline std::uint32_t decode_ueg0(RangeDecoder& dec, BinaryContext* prefix_ctx,
                                 int n_ctx) {
  int prefix = 0;
  while (dec.decode_bit(prefix_ctx[prefix < n_ctx ? prefix : n_ctx - 1]) == 1) {
    if (++prefix > 30) throw BitstreamError("exp-Golomb prefix overrun");
  }
  std::uint32_t m = 1u << prefix;
  if (prefix > 0) m |= dec.decode_bypass(prefix);
  return m - 1;
}

template <class Coder>
void encode_seg0(Coder& coder, BinaryContext* prefix_ctx, int n_ctx,
                 std::int32_t value) {
  encode_ueg0(coder, prefix_ctx, n_ctx, signed_to_unsigned(value));
}

inline std::int32_t decode_seg0(RangeDecoder& dec, BinaryContext* prefix_ctx,
                                int n_ctx) {
  return unsigned_to_signed(decode_ueg0(dec, prefix_ctx, n_ctx));
}

}  // namespace rdv
