#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rdv/transform.hpp"

using namespace rdv;

TEST_CASE("quality ladder") {
  REQUIRE(quality_level(1).delta == 128.0);
  REQUIRE(quality_level(3).delta == 64.0);
  REQUIRE(quality_level(8).delta == Catch::Approx(11.313708498984761));
  for (int i = 1; i < 8; ++i)
    REQUIRE(quality_level(i + 1).delta < quality_level(i).delta);
  for (int i = 1; i <= 8; ++i) {
    QualityLevel q = quality_level(i);
    REQUIRE(q.lambda_mode == Catch::Approx(0.1 * q.delta * q.delta));
  }
  REQUIRE_THROWS_AS(quality_level(0), ConfigError);
  REQUIRE_THROWS_AS(quality_level(9), ConfigError);
}

TEST_CASE("constant block transforms to a pure DC of 8c") {
  double in[64], out[64];
  for (double c : {1.0, 100.0, -37.0}) {
    for (double& v : in) v = c;
    dct8x8_forward(in, out);
    REQUIRE(out[0] == Catch::Approx(8.0 * c).margin(1e-9));
    for (int i = 1; i < 64; ++i) REQUIRE(std::abs(out[i]) < 1e-9);
  }
}

TEST_CASE("forward-inverse is the identity on integer residuals") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    double in[64], coeffs[64], back[64];
    for (double& v : in)
      v = static_cast<double>(static_cast<int>(rng() % 511) - 255);
    dct8x8_forward(in, coeffs);
    dct8x8_inverse(coeffs, back);
    for (int i = 0; i < 64; ++i)
      REQUIRE(std::nearbyint(back[i]) == Catch::Approx(in[i]));
  }
}

TEST_CASE("parseval energy identity") {
  std::mt19937_64 rng(23);
  double in[64], coeffs[64];
  for (double& v : in)
    v = static_cast<double>(static_cast<int>(rng() % 511) - 255);
  dct8x8_forward(in, coeffs);
  double e_in = 0.0, e_out = 0.0;
  for (int i = 0; i < 64; ++i) {
    e_in += in[i] * in[i];
    e_out += coeffs[i] * coeffs[i];
  }
  REQUIRE(e_out == Catch::Approx(e_in).epsilon(1e-6));
}

TEST_CASE("quantizer rounding and bounds") {
  QualityLevel q = quality_level(3);  // delta = 64, exactly representable
  REQUIRE(quantize_coeff(0.0, q) == 0);
  REQUIRE(dequantize_coeff(0, q) == 0.0);
  REQUIRE(quantize_coeff(q.delta * 3.5, q) == 4);       // halves away from zero
  REQUIRE(quantize_coeff(-q.delta * 3.5, q) == -4);
  REQUIRE(dequantize_coeff(4, q) == 4.0 * q.delta);
  REQUIRE_THROWS_AS(quantize_coeff(1e9, q), RangeError);
}

TEST_CASE("quantize-dequantize error is bounded by half a step") {
  std::mt19937_64 rng(29);
  for (int index : {1, 4, 8}) {
    QualityLevel q = quality_level(index);
    for (int trial = 0; trial < 1000; ++trial) {
      double coeff = (static_cast<double>(rng() % 2000001) - 1000000.0) / 490.0;
      std::int32_t level = quantize_coeff(coeff, q);
      double rec = dequantize_coeff(level, q);
      REQUIRE(std::abs(rec - coeff) <= q.delta / 2.0 + 1e-9);
    }
  }
}
