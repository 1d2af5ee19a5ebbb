#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlsb/potential.hpp"
#include "oracles.hpp"

using namespace nlsb;
using std::numbers::pi;

TEST_CASE("plane wave evaluates to C exp(i alpha x)") {
  const double l = pi;
  const cplx c(0.4, -0.2);
  const Potential pot = Potential::plane_wave(c, 2, l);
  const double alpha = 2.0 * pi / l;
  for (double x : {-2.0, -0.3, 0.0, 1.7}) {
    const cplx expect = c * std::polar(1.0, alpha * x);
    CHECK(std::abs(pot.eval(x) - expect) < 1e-14);
    CHECK(std::abs(pot.eval_conj(x) - std::conj(expect)) < 1e-14);
    CHECK(std::abs(pot.derivative(x) - cplx(0, alpha) * expect) < 1e-13);
  }
}

TEST_CASE("periodicity and translation") {
  std::mt19937_64 rng(7);
  const double l = 1.3;
  const Potential pot = testing::random_potential(rng, l, 3);
  const Potential moved = pot.translated(0.77);
  for (double x : {-1.0, 0.1, 0.9}) {
    CHECK(std::abs(pot.eval(x + 2.0 * l) - pot.eval(x)) < 1e-13);
    CHECK(std::abs(moved.eval(x) - pot.eval(x + 0.77)) < 1e-13);
  }
}

TEST_CASE("conserved quantities: plane-wave closed forms") {
  const double l = pi;
  const int n = 2;
  const cplx c(0.3, 0.4);
  const double alpha = pi * n / l;
  const double c2 = std::norm(c);
  const auto h = Potential::plane_wave(c, n, l).conserved_quantities();
  // Direct quadrature oracle on a denser independent grid.
  const auto dense =
      Potential::plane_wave(c, n, l).conserved_quantities(4096);
  CHECK(h.h1 == doctest::Approx(l * c2).epsilon(1e-12));
  CHECK(h.h2 == doctest::Approx(-alpha * l * c2).epsilon(1e-12));
  CHECK(h.h3 ==
        doctest::Approx(l * (alpha * alpha * c2 + c2 * c2)).epsilon(1e-12));
  CHECK(h.h1 == doctest::Approx(dense.h1).epsilon(1e-13));
  CHECK(h.h3 == doctest::Approx(dense.h3).epsilon(1e-13));
}

TEST_CASE("conserved quantities: H1 positivity and zero potential") {
  const Potential zero(1.0);
  const auto h = zero.conserved_quantities();
  CHECK(h.h1 == 0.0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const auto r = testing::random_potential(rng, 2.0).conserved_quantities();
    CHECK(r.h1 >= 0.0);
  }
}

TEST_CASE("json round trip") {
  std::mt19937_64 rng(11);
  const Potential pot = testing::random_potential(rng, 0.8, 2);
  const Potential back = Potential::from_json_text(pot.to_json_text());
  CHECK(back.half_period() == doctest::Approx(pot.half_period()));
  for (double x : {-0.5, 0.2, 0.7})
    CHECK(std::abs(back.eval(x) - pot.eval(x)) < 1e-14);
  CHECK_THROWS_AS(Potential::from_json_text("{\"l\": -1}"), ConfigError);
  CHECK_THROWS_AS(Potential::from_json_text("not json"), ConfigError);
}
