#pragma once

#include <Eigen/Core>
#include <complex>
#include <utility>
#include <vector>

#include "nlsb/gradient.hpp"
#include "nlsb/potential.hpp"

namespace nlsb {

using Matrix2c = Eigen::Matrix2cd;

struct IntegratorOptions {
  /// Local error tolerance of the embedded RK pair (absolute and relative).
  double tol = 1e-10;
  /// Reject lambda with |Im lambda| * l above this bound; the entries grow
  /// like exp(|Im lambda| l) and the caller must opt in to large excursions.
  double im_cap_scaled = 60.0;
  /// Smallest admissible step relative to the interval length.
  double min_step_fraction = 1e-13;
};

/// 2x2 solution M(x,y,lambda) of M' = V M, M(y,y,lambda) = I, with
/// V = -(i lambda / 2) sigma3 + [[0, conj(psi)], [psi, 0]].
struct TransitionMatrix {
  Matrix2c m;
  double x = 0.0;
  double y = 0.0;
  cplx lambda;

  cplx det() const { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }
  /// Inverse through the adjugate with det = 1.
  Matrix2c inverse_unimodular() const;
};

TransitionMatrix transition_matrix(const Potential& pot, double x, double y,
                                   cplx lambda,
                                   const IntegratorOptions& opts = {});

/// Jointly integrated (M, dM/dlambda); dM/dlambda(y,y) = 0.
std::pair<TransitionMatrix, Matrix2c> transition_with_lambda_derivative(
    const Potential& pot, double x, double y, cplx lambda,
    const IntegratorOptions& opts = {});

/// Monodromy M(x + 2l, x, lambda).
TransitionMatrix monodromy(const Potential& pot, double x, cplx lambda,
                           const IntegratorOptions& opts = {});

std::pair<TransitionMatrix, Matrix2c> monodromy_with_lambda_derivative(
    const Potential& pot, double x, cplx lambda,
    const IntegratorOptions& opts = {});

/// M(z_j, y, lambda) stored at the n+1 nodes of a uniform grid over [y, x].
struct TransitionGrid {
  double y = 0.0;
  double x = 0.0;
  cplx lambda;
  std::vector<Matrix2c> m;  // m[j] = M(z_j, y, lambda)
};

TransitionGrid transition_grid(const Potential& pot, double x, double y,
                               cplx lambda, std::size_t intervals,
                               const IntegratorOptions& opts = {});

/// Per-entry gradient kernels of the transition matrix:
///   dM(x,y)/dpsi(z)      = M(x,z) E21 M(z,y),
///   dM(x,y)/dconj(psi)(z) = M(x,z) E12 M(z,y),
/// sampled on the uniform grid of `transition_grid`.
struct MatrixGradientField {
  double y = 0.0;
  double x = 0.0;
  cplx lambda;
  std::vector<Matrix2c> d_psi;
  std::vector<Matrix2c> d_psibar;

  GradientField entry(int i, int j) const;
};

MatrixGradientField gradient_transition(const Potential& pot, double x,
                                        double y, cplx lambda,
                                        std::size_t grid_size,
                                        const IntegratorOptions& opts = {});

}  // namespace nlsb
