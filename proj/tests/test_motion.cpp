#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rdv/motion.hpp"
#include "test_util.hpp"

using namespace rdv;

namespace {

// Frame whose pixel (x, y) samples src at (x + dx, y): the prediction of the
// result from src needs the vector (dx, 0).
Frame sample_shifted(const Frame& src, int dx) {
  Frame out(src.width, src.height, src.display_index);
  for (int p = 0; p < 3; ++p) {
    int w = out.plane_width(p), h = out.plane_height(p);
    int d = p == 0 ? dx : dx / 2;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) out.set(p, x, y, src.at_clamped(p, x + d, y));
  }
  return out;
}

std::uint64_t luma_block_sad(const Frame& a, const Frame& b, int x0, int y0,
                             int bw, int bh) {
  std::uint64_t sad = 0;
  for (int y = y0; y < y0 + bh; ++y)
    for (int x = x0; x < x0 + bw; ++x)
      sad += static_cast<std::uint64_t>(std::abs(a.at(0, x, y) - b.at(0, x, y)));
  return sad;
}

}  // namespace

TEST_CASE("identical target locks to the zero vector with full past weight") {
  std::mt19937_64 rng(7);
  Frame ref = testutil::textured_frame(48, 32, 0, 4, rng);
  Frame future = testutil::noise_frame(48, 32, 1, rng);
  MotionField field = estimate_motion(ref, ref, &future);
  for (const MotionVector& mv : field.mv_past) {
    REQUIRE(mv.dx == 0);
    REQUIRE(mv.dy == 0);
  }
  for (auto beta : field.beta_half) REQUIRE(beta == 2);
}

TEST_CASE("global shift is recovered on interior blocks") {
  std::mt19937_64 rng(13);
  Frame ref = testutil::noise_frame(96, 64, 0, rng);
  Frame target = sample_shifted(ref, 4);
  MotionField field = estimate_motion(target, ref);
  // Interior blocks see the shifted content exactly; border columns are
  // contaminated by edge replication.
  for (int by = 0; by < field.blocks_y; ++by)
    for (int bx = 0; bx < field.blocks_x - 1; ++bx) {
      MotionVector mv = field.mv_past[field.block_index(bx, by)];
      REQUIRE(mv.dx == 4);
      REQUIRE(mv.dy == 0);
    }
}

TEST_CASE("block equal to the average of both references selects beta 1/2") {
  std::mt19937_64 rng(19);
  Frame past = testutil::noise_frame(32, 32, 0, rng);
  Frame future = testutil::noise_frame(32, 32, 2, rng);
  Frame target(32, 32, 1);
  for (int p = 0; p < 3; ++p) {
    int w = target.plane_width(p), h = target.plane_height(p);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        target.set(p, x, y,
                   static_cast<std::uint8_t>(avg_round_half_even(
                       past.at(p, x, y), future.at(p, x, y))));
  }
  MotionField field = estimate_motion(target, past, &future);
  for (auto beta : field.beta_half) REQUIRE(beta == 1);
}

TEST_CASE("compensation basics") {
  std::mt19937_64 rng(23);
  Frame ref = testutil::textured_frame(40, 24, 0, 4, rng);
  Frame future = testutil::textured_frame(40, 24, 2, 4, rng);

  SECTION("zero field with full past weight reproduces the reference") {
    MotionField field = estimate_motion(ref, ref);
    Frame pred = compensate(field, ref);
    REQUIRE(pred.same_samples(ref));
  }

  SECTION("beta  0 copies the motion-shifted future reference") {
    MotionField field;
    field.blocks_x = detail::blocks_in(40);
    field.blocks_y = detail::blocks_in(24);
    field.mv_past.assign(static_cast<std::size_t>(field.block_count()), {0, 0});
    field.mv_future.assign(static_cast<std::size_t>(field.block_count()), {0, 0});
    field.beta_half.assign(static_cast<std::size_t>(field.block_count()), 0);
    Frame pred = compensate(field, ref, &future);
    REQUIRE(pred.same_samples(future));
  }

  SECTION("an extreme vector at the edge clamps to the border column") {
    MotionField field;
    field.blocks_x = detail::blocks_in(40);
    field.blocks_y = detail::blocks_in(24);
    field.mv_past.assign(static_cast<std::size_t>(field.block_count()),
                         {-16, 0});
    Frame pred = compensate(field, ref);
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 16; ++x)
        REQUIRE(pred.at(0, x, y) == ref.at(0, 0, y));
  }
}

TEST_CASE("estimator never loses to the zero vector") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    Frame ref = testutil::textured_frame(48, 48, 0, 4, rng);
    Frame target = testutil::noise_frame(48, 48, 1, rng);
    MotionField field = estimate_motion(target, ref);
    MotionField zero = field;
    zero.mv_past.assign(zero.mv_past.size(), {0, 0});
    Frame pred = compensate(field, ref);
    Frame zero_pred = compensate(zero, ref);
    for (int by = 0; by < field.blocks_y; ++by)
      for (int bx = 0; bx < field.blocks_x; ++bx) {
        int x0 = bx * kBlockSize, y0 = by * kBlockSize;
        int bw = std::min(kBlockSize, 48 - x0), bh = std::min(kBlockSize, 48 - y0);
        REQUIRE(luma_block_sad(target, pred, x0, y0, bw, bh) <=
                luma_block_sad(target, zero_pred, x0, y0, bw, bh));
      }
  }
}

TEST_CASE("motion coding rate on an all-zero field decays to almost nothing") {
  MotionField field;
  field.blocks_x = 80;
  field.blocks_y = 64;  // 5120 blocks
  field.mv_past.assign(static_cast<std::size_t>(field.block_count()), {0, 0});
  RangeEncoder enc;
  MotionContexts ctx;
  encode_motion(enc, ctx, field);
  enc.finish();
  double bits_per_block =
      static_cast<double>(enc.cost_q16()) / 65536.0 / field.block_count();
  REQUIRE(bits_per_block < 0.02);
}

TEST_CASE("motion coding roundtrips random legal fields") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    bool bidir = (trial % 2) == 1;
    MotionField field;
    field.blocks_x = 1 + static_cast<int>(testutil::rnd_below(rng, 7));
    field.blocks_y = 1 + static_cast<int>(testutil::rnd_below(rng, 7));
    auto rand_mv = [&] {
      return MotionVector{
          static_cast<std::int16_t>(static_cast<int>(testutil::rnd_below(rng, 33)) - 16),
          static_cast<std::int16_t>(static_cast<int>(testutil::rnd_below(rng, 33)) - 16)};
    };
    std::size_t n = static_cast<std::size_t>(field.block_count());
    field.mv_past.resize(n);
    for (auto& mv : field.mv_past) mv = rand_mv();
    if (bidir) {
      field.mv_future.resize(n);
      for (auto& mv : field.mv_future) mv = rand_mv();
      field.beta_half.resize(n);
      for (auto& b : field.beta_half)
        b = static_cast<std::uint8_t>(testutil::rnd_below(rng, 3));
    }

    RangeEncoder enc;
    MotionContexts ectx;
    encode_motion(enc, ectx, field);
    enc.finish();

    RangeDecoder dec(enc.bytes());
    MotionContexts dctx;
    MotionField back = decode_motion(dec, dctx, field.blocks_x * kBlockSize,
                                     field.blocks_y * kBlockSize, bidir);
    REQUIRE(back.mv_past == field.mv_past);
    REQUIRE(back.mv_future == field.mv_future);
    REQUIRE(back.beta_half == field.beta_half);
  }
}

TEST_CASE("single block vector codes through an empty neighborhood") {
  MotionField field;
  field.blocks_x = 1;
  field.blocks_y = 1;
  field.mv_past = {{4, 0}};
  RangeEncoder enc;
  MotionContexts ectx;
  encode_motion(enc, ectx, field);
  enc.finish();
  RangeDecoder dec(enc.bytes());
  MotionContexts dctx;
  MotionField back = decode_motion(dec, dctx, 16, 16, false);
  REQUIRE(back.mv_past[0].dx == 4);
  REQUIRE(back.mv_past[0].dy == 0);
}

TEST_CASE("geometry mismatch is rejected") {
  Frame a(32, 32), b(32, 16);
  REQUIRE_THROWS_AS(estimate_motion(a, b), DimensionError);
}
