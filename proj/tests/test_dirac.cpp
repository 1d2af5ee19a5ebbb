#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlsb/dirac.hpp"
#include "oracles.hpp"

using namespace nlsb;
using std::numbers::pi;

namespace {
const Eigen::Matrix2cd kSigma1 = [] {
  Eigen::Matrix2cd s;
  s << 0, 1, 1, 0;
  return s;
}();
}  // namespace

TEST_CASE("free transition matrix is the exact exponential") {
  const Potential zero(pi);
  const cplx lam(0.7, 0.3);
  const TransitionMatrix t = transition_matrix(zero, 1.2, -0.4, lam);
  const cplx ph = cplx(0, -0.5) * lam * (1.2 - (-0.4));
  CHECK(std::abs(t.m(0, 0) - std::exp(ph)) < 1e-10);
  CHECK(std::abs(t.m(1, 1) - std::exp(-ph)) < 1e-10);
  CHECK(std::abs(t.m(0, 1)) < 1e-12);
  CHECK(std::abs(t.m(1, 0)) < 1e-12);
}

TEST_CASE("adaptive integrator agrees with fixed-step RK4 oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    const double l = 0.8 + 0.4 * trial;
    const Potential pot = testing::random_potential(rng, l, 2, 0.4);
    const cplx lam(1.1 - trial * 0.7, 0.25);
    const Eigen::Matrix2cd ref =
        testing::rk4_transition(pot, l, -l, lam, 20000);
    const TransitionMatrix t = transition_matrix(pot, l, -l, lam);
    CHECK((t.m - ref).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("det M = 1 and unimodular inverse") {
  std::mt19937_64 rng(5);
  const Potential pot = testing::random_potential(rng, pi, 2);
  const TransitionMatrix t = transition_matrix(pot, 2.0, -1.0, {0.4, -0.6});
  CHECK(std::abs(t.det() - 1.0) < 1e-10);
  const Eigen::Matrix2cd prod = t.m * t.inverse_unimodular();
  CHECK((prod - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("symmetry sigma1 conj(M(lambda)) sigma1 = M(conj lambda)") {
  std::mt19937_64 rng(9);
  const Potential pot = testing::random_potential(rng, 1.1, 2);
  const cplx lam(0.8, 0.45);
  const Eigen::Matrix2cd a = monodromy(pot, -0.3, lam).m;
  const Eigen::Matrix2cd b = monodromy(pot, -0.3, std::conj(lam)).m;
  CHECK((kSigma1 * a.conjugate() * kSigma1 - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("composition M(x,z) M(z,y) = M(x,y)") {
  std::mt19937_64 rng(13);
  const Potential pot = testing::random_potential(rng, 1.0, 2);
  const cplx lam(0.2, 0.1);
  const Eigen::Matrix2cd a = transition_matrix(pot, 1.4, 0.3, lam).m;
  const Eigen::Matrix2cd b = transition_matrix(pot, 0.3, -0.9, lam).m;
  const Eigen::Matrix2cd c = transition_matrix(pot, 1.4, -0.9, lam).m;
  CHECK((a * b - c).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("lambda derivative matches central differences") {
  std::mt19937_64 rng(17);
  const Potential pot = testing::random_potential(rng, 1.0, 1);
  const cplx lam(0.5, 0.2);
  const auto [t, dm] = monodromy_with_lambda_derivative(pot, 0.0, lam);
  const double h = 1e-5;
  const Eigen::Matrix2cd fd =
      (monodromy(pot, 0.0, lam + h).m - monodromy(pot, 0.0, lam - h).m) /
      (2.0 * h);
  CHECK((dm - fd).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("gradient kernels match Gateaux finite differences") {
  std::mt19937_64 rng(25);
  const double l = 1.0;
  const Potential pot = testing::random_potential(rng, l, 1, 0.35);
  const cplx lam(0.6, 0.15);
  const MatrixGradientField g = gradient_transition(pot, l, -l, lam, 256);
  const double eps = 1e-6;
  for (int mode : {0, 1, -2}) {
    for (int i : {0, 1})
      for (int j : {0, 1}) {
        // Analytic directional derivative of M_ij along the Fourier mode.
        const cplx pred = testing::gradient_pairing(
            g.entry(i, j), testing::fourier_mode(mode, l));
        const Eigen::Matrix2cd mp =
            transition_matrix(testing::perturbed(pot, mode, eps), l, -l, lam)
                .m;
        const Eigen::Matrix2cd mm =
            transition_matrix(testing::perturbed(pot, mode, -eps), l, -l, lam)
                .m;
        const cplx fd = (mp(i, j) - mm(i, j)) / (2.0 * eps);
        CHECK(std::abs(pred - fd) < 1e-7);
      }
  }
}

TEST_CASE("imaginary-part cap rejects extreme lambda") {
  const Potential zero(pi);
  IntegratorOptions opts;
  opts.im_cap_scaled = 10.0;
  CHECK_THROWS_AS(monodromy(zero, 0.0, {0.0, 100.0}, opts), IntegratorError);
}
