#include <catch2/catch_amalgamated.hpp>

#include "imdd/shaping.hpp"
#include "imdd/rng.hpp"

using namespace imdd;

namespace {
std::vector<cdouble> random_taps(Rng& rng, int m) {
  std::vector<cdouble> t(static_cast<std::size_t>(m));
  for (auto& v : t) v = cdouble(rng.gaussian(), rng.gaussian());
  return t;
}
}  // namespace

TEST_CASE("two-point alphabet on a clean scalar channel shapes freely") {
  const ConvOperator op = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  const ShapingResult r = optimize_span(op, 2, 1.0, 0.0);
  // every span recovers exactly, so ties resolve to the widest spacing
  CHECK(r.esr <= 1e-6);
  CHECK(r.d_norm == 1.0);
  CHECK(r.constellation.order() == 2);
}

TEST_CASE("returned span is grid-optimal and self-consistent") {
  Rng rng(31);
  const ConvOperator op = build_conv_operator(random_taps(rng, 5), 5);
  const StatsKernel kr(op);
  const double p = 1.2;
  const double sigma_eta2 = 0.4;
  const ShapingResult r = optimize_span(kr, 4, p, sigma_eta2);

  CHECK(r.d_norm > 0.0);
  CHECK(r.d_norm <= 1.0);
  for (int j = 1; j <= 33; ++j) {
    const double d = j / 33.0;
    const double esr = analytic_esr(kr, build_pam(4, p, 2.0 * p * d), sigma_eta2);
    CHECK(r.esr <= esr + 1e-12);
  }
  // re-evaluating the objective at the returned constellation reproduces
  // the stored value exactly
  CHECK(analytic_esr(kr, r.constellation, sigma_eta2) == r.esr);
  CHECK(r.constellation.points ==
        build_pam(4, p, 2.0 * p * r.d_norm).points);
}

TEST_CASE("heavy noise pushes the span to the maximum") {
  Rng rng(77);
  const ConvOperator op = build_conv_operator(random_taps(rng, 5), 5);
  const ShapingResult r = optimize_span(op, 4, 1.0, 1e6);
  CHECK(r.d_norm >= 0.99);
}

TEST_CASE("matched-objective search uses the exact-statistics esr") {
  Rng rng(13);
  const ConvOperator op = build_conv_operator(random_taps(rng, 3), 3);
  const StatsKernel kr(op);
  const ShapingResult r = optimize_span_matched(kr, 4, 1.0, 0.05);
  CHECK(matched_esr(kr, r.constellation, 0.05) == r.esr);
  for (int j = 1; j <= 33; ++j) {
    const double esr = matched_esr(kr, build_pam(4, 1.0, 2.0 * j / 33.0), 0.05);
    CHECK(r.esr <= esr + 1e-12);
  }
}

TEST_CASE("shaping argument validation") {
  const ConvOperator op = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  CHECK_THROWS_AS(optimize_span(op, 1, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(optimize_span(op, 4, 0.0, 0.1), std::invalid_argument);
}
