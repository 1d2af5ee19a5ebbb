#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "nlsb/toda.hpp"
#include "oracles.hpp"

using namespace nlsb;

namespace {

TodaState random_state(std::mt19937_64& rng, int n, double amp = 0.5) {
  std::normal_distribution<double> g(0.0, amp);
  TodaState s;
  for (int k = 0; k < n; ++k) {
    s.q.push_back(g(rng));
    s.p.push_back(g(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("jacobi matrix shape and residue normalization") {
  std::mt19937_64 rng(61);
  for (int n : {2, 3, 4, 6}) {
    const TodaState s = random_state(rng, n);
    const Eigen::MatrixXd l = jacobi_matrix(s);
    CHECK(l.rows() == n);
    CHECK((l - l.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const TodaSpectralData d = toda_spectral_data(s);
    const double total =
        std::accumulate(d.residues.begin(), d.residues.end(), 0.0);
    CHECK(std::abs(total - 1.0) < 1e-12);
    for (double r : d.residues) CHECK(r >= 0.0);
    for (std::size_t k = 1; k < d.eigenvalues.size(); ++k)
      CHECK(d.eigenvalues[k] > d.eigenvalues[k - 1]);
  }
}

TEST_CASE("partial-fraction and resolvent forms of the Weyl function agree") {
  std::mt19937_64 rng(67);
  const TodaState s = random_state(rng, 4);
  const TodaSpectralData d = toda_spectral_data(s);
  for (cplx lam : {cplx(0.3, 0.4), cplx(-1.2, 0.1), cplx(2.5, -0.7)}) {
    CHECK(std::abs(toda_weyl(d, lam) - toda_weyl_resolvent(s, lam)) < 1e-10);
  }
  CHECK_THROWS_AS(toda_weyl(d, cplx(d.eigenvalues[0], 0.0)), PoleError);
}

TEST_CASE("bracket of the Weyl function closes on itself") {
  std::mt19937_64 rng(71);
  for (int n : {2, 3, 5}) {
    const TodaState s = random_state(rng, n, 0.4);
    const TodaMahCheck c = verify_mah(s, {0.35, 0.2}, {-0.6, -0.3});
    CHECK(c.residual < 1e-5);
  }
}

TEST_CASE("trace of L is a casimir of the restricted bracket") {
  std::mt19937_64 rng(73);
  const TodaState s = random_state(rng, 4, 0.4);
  const TodaObservable trace = [](const TodaState& st) {
    return cplx(jacobi_matrix(st).trace(), 0.0);
  };
  const TodaObservable weyl_at = [](const TodaState& st) {
    return toda_weyl(toda_spectral_data(st), {0.45, 0.3});
  };
  CHECK(std::abs(toda_bracket(s, trace, weyl_at)) < 1e-8);
}

TEST_CASE("canonical pairs under the finite-difference bracket") {
  std::mt19937_64 rng(79);
  const TodaState s = random_state(rng, 3);
  const TodaObservable q1 = [](const TodaState& st) { return cplx(st.q[1]); };
  const TodaObservable p1 = [](const TodaState& st) { return cplx(st.p[1]); };
  const TodaObservable p0 = [](const TodaState& st) { return cplx(st.p[0]); };
  CHECK(std::abs(toda_bracket(s, q1, p1) - 1.0) < 1e-9);
  CHECK(std::abs(toda_bracket(s, q1, p0)) < 1e-9);
}

TEST_CASE("flow preserves the spectrum and the hamiltonian") {
  std::mt19937_64 rng(83);
  const TodaState s0 = random_state(rng, 4, 0.4);
  const TodaSpectralData d0 = toda_spectral_data(s0);
  const TodaState s1 = toda_flow_step(s0, 1e-3, 2000);  // t = 2
  const TodaSpectralData d1 = toda_spectral_data(s1);
  for (std::size_t k = 0; k < d0.eigenvalues.size(); ++k)
    CHECK(std::abs(d1.eigenvalues[k] - d0.eigenvalues[k]) < 1e-8);
  auto energy = [](const TodaState& st) {
    double h = 0.0;
    for (std::size_t k = 0; k < st.size(); ++k) h += 0.5 * st.p[k] * st.p[k];
    for (std::size_t k = 0; k + 1 < st.size(); ++k)
      h += std::exp(st.q[k] - st.q[k + 1]);
    return h;
  };
  CHECK(std::abs(energy(s1) - energy(s0)) < 1e-8);
}

TEST_CASE("invalid states are rejected") {
  CHECK_THROWS_AS(jacobi_matrix(TodaState{{0.0}, {0.0}}), ConfigError);
  CHECK_THROWS_AS(jacobi_matrix(TodaState{{0.0, 1.0}, {0.0}}), ConfigError);
}
