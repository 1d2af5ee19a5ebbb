#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "nlsb/errors.hpp"

namespace nlsb {

using cplx = std::complex<double>;

/// Open Toda chain: H = sum p_k^2/2 + sum_{k<N} exp(q_k - q_{k+1}).
struct TodaState {
  std::vector<double> q;
  std::vector<double> p;

  std::size_t size() const { return q.size(); }
};

/// Spectral data of the Jacobi matrix: simple eigenvalues l_1 < ... < l_N
/// and residues rho_k = (first eigenvector component)^2, sum rho_k = 1.
struct TodaSpectralData {
  std::vector<double> eigenvalues;
  std::vector<double> residues;
};

/// Symmetric tridiagonal L: diagonal -p_k, off-diagonal
/// c_k = exp((q_k - q_{k+1})/2).
Eigen::MatrixXd jacobi_matrix(const TodaState& state);

TodaSpectralData toda_spectral_data(const TodaState& state);

/// Rational Weyl function X(lambda) = sum rho_k / (l_k - lambda).
cplx toda_weyl(const TodaSpectralData& data, cplx lambda);

/// Same value as the (1,1) entry of (L - lambda)^{-1} (independent check).
cplx toda_weyl_resolvent(const TodaState& state, cplx lambda);

using TodaObservable = std::function<cplx(const TodaState&)>;

/// Canonical bracket {F,G} = sum dF/dq_k dG/dp_k - dF/dp_k dG/dq_k by
/// Richardson-refined central differences.
cplx toda_bracket(const TodaState& state, const TodaObservable& f,
                  const TodaObservable& g, double fd_step = 1e-6);

/// Residual of {X(lambda), X(mu)} against
/// (X(lambda)-X(mu)) [ (X(lambda)-X(mu))/(lambda-mu) - X(lambda) X(mu) ].
struct TodaMahCheck {
  cplx lhs;
  cplx rhs;
  double residual;
};

TodaMahCheck verify_mah(const TodaState& state, cplx lambda, cplx mu,
                        double fd_step = 1e-6);

/// RK4 integration of the Toda equations of motion.
TodaState toda_flow_step(const TodaState& state, double dt, int steps);

}  // namespace nlsb
