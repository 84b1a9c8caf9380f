#include <catch2/catch_amalgamated.hpp>

#include "imdd/conv_operator.hpp"
#include "imdd/rng.hpp"

using namespace imdd;

namespace {

std::vector<cdouble> random_taps(Rng& rng, int m) {
  std::vector<cdouble> t(static_cast<std::size_t>(m));
  for (auto& v : t) v = cdouble(rng.gaussian(), rng.gaussian());
  return t;
}

// convolve the zero-inserted upsampled symbols with the taps and square:
// the reference for what the decimated operator must reproduce. Symbol n
// sits at even offset 2*(n - m_prime) from the estimation instant;
// observation i reads r[i] = sum_m taps[m] * s'[i - m].
Eigen::VectorXd oracle_forward(const std::vector<cdouble>& taps, int k_obs,
                               const Eigen::VectorXd& symbols) {
  const int m = static_cast<int>(taps.size());
  const int m_prime = (m - 1) / 2;
  Eigen::VectorXd out(k_obs);
  for (int i = 0; i < k_obs; ++i) {
    cdouble acc(0.0, 0.0);
    for (int mm = 0; mm < m; ++mm) {
      const int offset = i - mm;  // position relative to the estimation instant
      if (((offset % 2) + 2) % 2 != 0) continue;  // odd instants carry zeros
      const int n = offset / 2 + m_prime;
      if (n < 0 || n >= symbols.size()) continue;
      acc += taps[static_cast<std::size_t>(mm)] * symbols(n);
    }
    out(i) = std::norm(acc);
  }
  return out;
}

}  // namespace

TEST_CASE("operator dimensions and decimation bookkeeping") {
  Rng rng(11);
  const auto t3 = random_taps(rng, 3);
  const ConvOperator op = build_conv_operator(t3, 4);
  CHECK(op.rows() == 4);
  CHECK(op.cols() == 3);
  CHECK(op.m_prime == 1);
  CHECK(op.k_prime == 1);
  CHECK(op.target_col == 1);

  // kept columns of the 4x6 pre-decimation matrix are {0, 2, 4}
  CHECK(op.psi(0, 0) == t3[2]);
  CHECK(op.psi(0, 1) == t3[0]);
  CHECK(op.psi(0, 2) == cdouble(0.0, 0.0));
  CHECK(op.psi(1, 1) == t3[1]);
  CHECK(op.psi(2, 1) == t3[2]);
  CHECK(op.psi(2, 2) == t3[0]);
  CHECK(op.psi(3, 2) == t3[1]);

  const ConvOperator scalar = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  CHECK(scalar.rows() == 1);
  CHECK(scalar.cols() == 1);
  CHECK(scalar.target_col == 0);
  CHECK(scalar.psi(0, 0) == cdouble(1.0, 0.0));

  // M=1, K=2: the second observation window sample falls on an odd
  // (zero-inserted) instant, so only one symbol column survives
  const ConvOperator two = build_conv_operator({cdouble(0.5, -0.25)}, 2);
  CHECK(two.rows() == 2);
  CHECK(two.cols() == 1);
  CHECK(two.psi(0, 0) == cdouble(0.5, -0.25));
  CHECK(two.psi(1, 0) == cdouble(0.0, 0.0));
}

TEST_CASE("column count follows the parity formula for random sizes") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform_int(12));
    const int k = 1 + static_cast<int>(rng.uniform_int(12));
    const ConvOperator op = build_conv_operator(random_taps(rng, m), k);
    CHECK(op.cols() == (m - 1) / 2 + (k - 1) / 2 + 1);
    CHECK(op.target_col == (m - 1) / 2);
    CHECK(op.target_col < op.cols());
    // target column must carry the tap ordering: some row sees psi[...]
    CHECK(op.psi.col(op.target_col).cwiseAbs().maxCoeff() > 0.0);
  }
}

TEST_CASE("operator rejects bad input") {
  CHECK_THROWS_AS(build_conv_operator(std::vector<cdouble>{}, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_conv_operator({cdouble(1.0, 0.0)}, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_conv_operator({cdouble(1.0, 0.0)}, 2, 4), std::invalid_argument);
}

TEST_CASE("forward channel squares the field and adds seeded noise") {
  const ConvOperator scalar = build_conv_operator({cdouble(1.0, 0.0)}, 1);
  Eigen::VectorXd s(1);
  s << 2.0;
  const Eigen::VectorXd u = forward_simulate(scalar, s, 0.0, 1);
  CHECK(u(0) == 4.0);

  const ConvOperator two = build_conv_operator({cdouble(1.0, 0.0)}, 2);
  Eigen::VectorXd s1(1);
  s1 << 3.0;
  const Eigen::VectorXd u2 = forward_simulate(two, s1, 0.0, 1);
  CHECK(u2(0) == 9.0);
  CHECK(u2(1) == 0.0);

  Eigen::VectorXd bad(3);
  bad.setZero();
  CHECK_THROWS_AS(forward_simulate(two, bad, 0.0, 1), std::invalid_argument);

  const Eigen::VectorXd a = forward_simulate(two, s1, 0.5, 99);
  const Eigen::VectorXd b = forward_simulate(two, s1, 0.5, 99);
  const Eigen::VectorXd c = forward_simulate(two, s1, 0.5, 100);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("forward channel matches a direct convolution oracle") {
  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform_int(6));
    const int k = 1 + static_cast<int>(rng.uniform_int(6));
    const auto taps = random_taps(rng, m);
    const ConvOperator op = build_conv_operator(taps, k);
    Eigen::VectorXd s(op.cols());
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = rng.uniform01() * 2.0;
    const Eigen::VectorXd u = forward_simulate(op, s, 0.0, 0);
    const Eigen::VectorXd ref = oracle_forward(taps, k, s);
    for (int i = 0; i < k; ++i) CHECK(u(i) == Catch::Approx(ref(i)).epsilon(1e-12).margin(1e-12));
  }
}
