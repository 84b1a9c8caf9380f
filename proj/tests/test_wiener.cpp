#include <catch2/catch_amalgamated.hpp>

#include "imdd/wiener.hpp"
#include "imdd/rng.hpp"

using namespace imdd;

namespace {
std::vector<cdouble> random_taps(Rng& rng, int m) {
  std::vector<cdouble> t(static_cast<std::size_t>(m));
  for (auto& v : t) v = cdouble(rng.gaussian(), rng.gaussian());
  return t;
}
}  // namespace

TEST_CASE("scalar channel is inverted exactly without noise") {
  const ConvOperator op = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  const Constellation c = build_pam(2, 1.0, 2.0);  // {0, 2}
  const WienerFilter f = matched_wf(op, c, 0.0);
  CHECK(f.taps(0).real() == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(f.taps(0).imag() == 0.0);
  CHECK(f.bias.real() == Catch::Approx(0.0).margin(1e-12));
  Eigen::VectorXd u(1);
  u << 0.0;
  CHECK(f.estimate(u) == Catch::Approx(0.0).margin(1e-12));
  u << 4.0;
  CHECK(f.estimate(u) == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("estimator collapses to the prior mean when uninformative") {
  Rng rng(5);
  const ConvOperator op = build_conv_operator(random_taps(rng, 3), 4);

  // zero cross-covariance: explicit zero-variance alphabet
  const Constellation flat = build_pam(4, 1.0, 0.0);
  const WienerFilter fm = matched_wf(op, flat, 0.3);
  CHECK(fm.taps.isZero(0.0));
  CHECK(fm.bias.real() == 1.0);

  const WienerFilter fmm = mismatched_wf(op, flat, 0.3);
  CHECK(fmm.taps.isZero(0.0));
  CHECK(fmm.bias.real() == 1.0);

  const WienerFilter fn = naive_wf(op, flat, 0.3);
  CHECK(fn.taps.isZero(0.0));
  CHECK(fn.bias.real() == 1.0);

  // overwhelming noise drives the taps to zero
  const Constellation c = build_pam(4, 1.0, 1.0);
  const WienerFilter f = matched_wf(op, c, 1e12);
  CHECK(f.taps.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(f.bias.real() == Catch::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mismatched filter is near-exact where sqrt is near-affine") {
  const ConvOperator op = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  const Constellation breve = make_constellation({0.81, 1.21});  // sqrt: {0.9, 1.1}
  const WienerFilter f = mismatched_wf(op, breve, 0.0);
  // noiseless scalar channel passes the data through the square law
  // unchanged, so the estimate error is pure linearization error: the
  // tangent at the mean misses the two points by ~5e-3 in amplitude,
  // which lands at 2.45e-3 of the symbol variance after squaring
  double mse = 0.0;
  for (double b : breve.points) {
    Eigen::VectorXd u(1);
    u << b;  // |sqrt(b)|^2
    const double e = f.estimate(u) - b;
    mse += 0.5 * e * e;
  }
  CHECK(mse < 3e-3 * breve.variance);
  CHECK(mse > 1e-4 * breve.variance);  // tangent, not secant: bias does not vanish
}

TEST_CASE("mismatched filter cannot beat the best affine estimator") {
  const ConvOperator op = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  const Constellation breve = build_pam(2, 1.0, 2.0);
  const double sigma_eta2 = 0.05;
  const WienerFilter f = mismatched_wf(op, breve, sigma_eta2);

  // closed-form empirical MSE' of an affine estimate g*u + gm on the
  // scalar predistorted channel u = b + eta
  auto mse_of = [&](double g, double gm) {
    double acc = 0.0;
    for (double b : breve.points) acc += 0.5 * ((g * b + gm - b) * (g * b + gm - b));
    return acc + g * g * sigma_eta2;
  };
  const double mse_f = mse_of(f.taps(0).real(), f.bias.real());

  double best = 1e300;
  for (int i = 0; i <= 400; ++i)
    for (int j = 0; j <= 400; ++j) {
      const double g = -1.0 + 3.0 * i / 400.0;
      const double gm = -1.5 + 3.0 * j / 400.0;
      best = std::min(best, mse_of(g, gm));
    }
  CHECK(mse_f >= best - 1e-9);
  CHECK(mse_f <= 5.0 * best);  // the gap is pure taylor mismatch
}

TEST_CASE("matched solution is grid-optimal within the affine class") {
  const ConvOperator op = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  const Constellation c = build_pam(4, 1.0, 1.4);
  const double sigma_eta2 = 0.1;
  const WienerFilter f = matched_wf(op, c, sigma_eta2);

  auto mse_of = [&](double g, double gm) {
    double acc = 0.0;
    for (double b : c.points) {
      const double u = b * b;  // symbols drive the square law directly
      acc += 0.25 * ((g * u + gm - b) * (g * u + gm - b));
    }
    return acc + g * g * sigma_eta2;
  };
  const double mse_f = mse_of(f.taps(0).real(), f.bias.real());
  double best = 1e300;
  for (int i = 0; i <= 500; ++i)
    for (int j = 0; j <= 500; ++j) {
      const double g = -0.5 + 2.0 * i / 500.0;
      const double gm = -1.0 + 3.0 * j / 500.0;
      best = std::min(best, mse_of(g, gm));
    }
  CHECK(mse_f <= best + 1e-6);
}

TEST_CASE("naive filter estimate is real and handles the real channel") {
  Rng rng(8);
  // real taps: the complex normal equations degenerate to real ones
  std::vector<cdouble> taps = {cdouble(0.2, 0.0), cdouble(1.0, 0.0), cdouble(0.2, 0.0)};
  const ConvOperator op = build_conv_operator(taps, 3);
  const Constellation c = build_pam(4, 1.0, 1.0);
  const WienerFilter f = naive_wf(op, c, 0.2);
  for (int i = 0; i < f.size(); ++i) CHECK(std::abs(f.taps(i).imag()) < 1e-12);

  const ConvOperator opc = build_conv_operator(random_taps(rng, 3), 3);
  const WienerFilter fc = naive_wf(opc, c, 0.2);
  Eigen::VectorXd u(3);
  u << 0.3, 1.4, 0.9;
  const double est = fc.estimate(u);  // real by the Re{} rule
  CHECK(std::isfinite(est));
}

TEST_CASE("analytic esr closed forms") {
  const ConvOperator op = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  const Constellation c = build_pam(2, 1.0, 2.0);
  CHECK(analytic_esr(op, c, 0.0) == Catch::Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(analytic_esr(op, build_pam(4, 1.0, 0.0), 0.1), std::domain_error);

  // huge noise: estimator no better than the prior mean
  CHECK(analytic_esr(op, c, 1e14) == Catch::Approx(1.0).epsilon(1e-6));
  CHECK(matched_esr(op, c, 1e14) == Catch::Approx(1.0).epsilon(1e-6));

  // vanishing cross-covariance at the stats level gives esr exactly 1
  const StatsKernel kr(op);
  const OutputStats s = output_stats(kr, SymbolMoments{0.0, 0.5, 0.4}, 0.3);
  CHECK(s.c_su.isZero(0.0));
}

TEST_CASE("singular covariance raises an explicit error") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2, 2);
  Eigen::VectorXd b(2);
  b << 1.0, 0.0;
  CHECK_THROWS_AS(spd_solve(zero, b), std::runtime_error);

  // near-PD case is rescued by the jitter fallback
  Eigen::MatrixXd c(2, 2);
  c << 4.0, 0.0, 0.0, 0.0;
  const Eigen::VectorXd x = spd_solve(c, Eigen::VectorXd::Constant(2, 0.0).eval());
  CHECK(x.allFinite());
}
