#include <catch2/catch_amalgamated.hpp>

#include "imdd/channel.hpp"

using namespace imdd;

namespace {
LinkParams reference_link(double length_km) {
  LinkParams p;
  p.length_km = length_km;
  return p;
}
}  // namespace

TEST_CASE("dispersion frequency response is all-pass") {
  const LinkParams p20 = reference_link(20.0);
  const auto h0 = cd_frequency_response(p20, {0.0});
  CHECK(h0[0].real() == 1.0);
  CHECK(h0[0].imag() == 0.0);

  const LinkParams btb = reference_link(0.0);
  const auto hb = cd_frequency_response(btb, {1e9, -5e9, 13.5e9});
  for (const auto& v : hb) {
    CHECK(v.real() == 1.0);
    CHECK(v.imag() == 0.0);
  }

  const auto h = cd_frequency_response(p20, {-13.5e9, -1e9, 3.7e9, 13.5e9});
  for (const auto& v : h) CHECK(std::abs(v) == Catch::Approx(1.0).epsilon(1e-14));
  // even in frequency
  const auto hp = cd_frequency_response(p20, {4.2e9});
  const auto hm = cd_frequency_response(p20, {-4.2e9});
  CHECK(hp[0] == hm[0]);
}

TEST_CASE("back-to-back impulse response is the sampled sinc") {
  const Cir cir = sample_cir(reference_link(0.0));
  REQUIRE(cir.size() == 127);
  const int c = cir.center_index;
  CHECK(c == 63);
  CHECK(cir.sample_period_s == Catch::Approx(1.0 / 54e9).epsilon(1e-12));

  const double two_over_pi = 2.0 / 3.141592653589793238462643383279502884;
  CHECK(std::abs(cir.taps[c] - cdouble(1.0, 0.0)) < 1e-4);
  for (int sgn : {-1, 1}) {
    CHECK(std::abs(cir.taps[c + sgn] - cdouble(two_over_pi, 0.0)) < 1e-4);
    CHECK(std::abs(cir.taps[c + 2 * sgn]) < 1e-4);
    CHECK(std::abs(cir.taps[c + 3 * sgn] + cdouble(two_over_pi / 3.0, 0.0)) < 1e-4);
  }
  for (const auto& t : cir.taps) CHECK(std::abs(t.imag()) < 1e-9);
}

TEST_CASE("dispersed impulse response is genuinely complex and energy-preserving") {
  const Cir c0 = sample_cir(reference_link(0.0));
  const Cir c20 = sample_cir(reference_link(20.0));
  CHECK(c20.size() > c0.size());

  double max_imag = 0.0;
  for (const auto& t : c20.taps) max_imag = std::max(max_imag, std::abs(t.imag()));
  CHECK(max_imag > 0.01);

  // all-pass: dense-grid energies agree to floating rounding
  CHECK(c20.dense_energy == Catch::Approx(c0.dense_energy).epsilon(1e-9));
}

TEST_CASE("truncation keeps only taps at or above the relative floor") {
  const Cir full = sample_cir(reference_link(20.0));
  double max_mag = 0.0;
  for (const auto& t : full.taps) max_mag = std::max(max_mag, std::abs(t));
  CHECK(std::abs(full.taps.front()) >= 0.01 * max_mag);
  CHECK(std::abs(full.taps.back()) >= 0.01 * max_mag);

  const Cir single = sample_cir(reference_link(20.0), 1.0);
  CHECK(single.size() == 1);
  CHECK(single.center_index == 0);
  CHECK(std::abs(single.taps[0]) == Catch::Approx(max_mag).epsilon(1e-12));
}

TEST_CASE("insufficient grid resolution is an explicit error") {
  CHECK_THROWS_AS(sample_cir(reference_link(0.0), 0.01, 64), std::runtime_error);
  CHECK_THROWS_AS(sample_cir(reference_link(20.0), 0.001, 256), std::runtime_error);
  CHECK_THROWS_AS(sample_cir(reference_link(0.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_cir(reference_link(0.0), 1.5), std::invalid_argument);
  CHECK_THROWS_AS(sample_cir(reference_link(0.0), 0.01, 100), std::invalid_argument);
}
