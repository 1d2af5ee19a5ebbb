#pragma once

// Independent reference implementations used only by the tests: a fixed-step
// RK4 integrator for the 2x2 auxiliary problem (checks the adaptive
// integrator), a Gateaux finite-difference pairing (checks analytic gradient
// kernels), and random potential factories.

#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nlsb/gradient.hpp"
#include "nlsb/potential.hpp"

namespace nlsb::testing {

/// Classical RK4 with a fixed number of steps for M' = V M, M(y,y) = I.
inline Eigen::Matrix2cd rk4_transition(const Potential& pot, double x,
                                       double y, cplx lambda, int steps) {
  const cplx ihalf = cplx(0.0, -0.5) * lambda;
  auto v = [&](double t) {
    Eigen::Matrix2cd m;
    m << ihalf, pot.eval_conj(t), pot.eval(t), -ihalf;
    return m;
  };
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  const double h = (x - y) / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = y + s * h;
    const Eigen::Matrix2cd k1 = v(t) * m;
    const Eigen::Matrix2cd k2 = v(t + 0.5 * h) * (m + 0.5 * h * k1);
    const Eigen::Matrix2cd k3 = v(t + 0.5 * h) * (m + 0.5 * h * k2);
    const Eigen::Matrix2cd k4 = v(t + h) * (m + h * k3);
    m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return m;
}

/// Pairing <grad F, v> = Int g_psi v + g_psibar conj(v) dx on the gradient
/// grid (Simpson for an even panel count, trapezoid otherwise), to compare
/// with a directional finite difference.
inline cplx gradient_pairing(const GradientField& g,
                             const std::function<cplx(double)>& v) {
  cplx sum = 0.0;
  const std::size_t n = g.size();
  const double h = (g.x - g.y) / static_cast<double>(n - 1);
  const bool simpson = (n - 1) % 2 == 0;
  for (std::size_t j = 0; j < n; ++j) {
    double w;
    if (simpson)
      w = (j == 0 || j + 1 == n) ? 1.0 / 3.0 : (j % 2 == 1 ? 4.0 / 3.0 : 2.0 / 3.0);
    else
      w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    const cplx vj = v(g.grid_point(j));
    sum += w * (g.g_psi[j] * vj + g.g_psibar[j] * std::conj(vj));
  }
  return sum * h;
}

/// Random finite Fourier series with modes in [-max_mode, max_mode] and
/// coefficient scale `amp`.
inline Potential random_potential(std::mt19937_64& rng, double half_period,
                                  int max_mode = 2, double amp = 0.3) {
  std::normal_distribution<double> g(0.0, amp);
  std::map<int, cplx> c;
  for (int k = -max_mode; k <= max_mode; ++k) c[k] = cplx(g(rng), g(rng));
  return Potential(half_period, std::move(c));
}

/// Fourier perturbation direction exp(i pi k x / l).
inline std::function<cplx(double)> fourier_mode(int k, double half_period) {
  return [k, half_period](double x) {
    return std::polar(1.0, std::numbers::pi * k * x / half_period);
  };
}

/// Potential shifted by eps * exp(i pi k x / l) in psi.
inline Potential perturbed(const Potential& pot, int k, cplx eps) {
  auto c = pot.coeffs();
  c[k] += eps;
  return Potential(pot.half_period(), std::move(c));
}

}  // namespace nlsb::testing
