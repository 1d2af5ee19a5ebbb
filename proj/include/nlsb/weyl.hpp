#pragma once

#include <utility>

#include "nlsb/dirac.hpp"
#include "nlsb/spectrum.hpp"

namespace nlsb {

/// Projective value num/den; infinity (den = 0) is first-class.
struct Projective {
  cplx num;
  cplx den;

  bool is_infinite(double tol = 1e-12) const {
    return std::abs(den) <= tol * (1.0 + std::abs(num));
  }
  /// Finite value; throws PoleError at infinity.
  cplx value() const {
    if (is_infinite(1e-300)) throw PoleError("projective value is infinite");
    return num / den;
  }
};

/// Moebius map X -> (d X + b)/(c X + a) in projective form.
Projective lft_transform(const Projective& x, cplx a, cplx b, cplx c, cplx d);

/// Floquet-solution coefficient A(y, Q) = M12/(M12 - M11 + w), with the
/// equivalent (w - M22)/(M21 - M22 + w) recorded as a consistency residual.
struct ACoefficient {
  cplx a;
  double residual;
};

ACoefficient coefficient_A(const Potential& pot, double y, const CurvePoint& q,
                           const IntegratorOptions& opts = {},
                           double pole_tol = 1e-8);

/// Floquet solution e(x, y, Q) = A * M(:,1) + (1 - A) * M(:,2); satisfies
/// e(x + 2l) = w e(x) and e1(y,y) + e2(y,y) = 1.
Eigen::Vector2cd floquet_solution(const Potential& pot, double x, double y,
                                  const CurvePoint& q,
                                  const IntegratorOptions& opts = {});

/// Weyl function X(x, Q) = (w - M11)/M12 = M21/(w - M22) with the monodromy
/// based at x, returned through whichever expression is better conditioned.
struct WeylValue {
  CurvePoint q;
  double x;
  cplx a;                      // coefficient A(x, Q)
  Projective weyl;             // X(x, Q)
  double consistency_residual; // characteristic-equation defect of (w, M)
};

WeylValue weyl_function(const Potential& pot, double x, const CurvePoint& q,
                        const IntegratorOptions& opts = {});

/// Wronskian-type function W(y, Q) = A(y, eps_pm Q) - A(y, Q).
cplx wronskian_W(const Potential& pot, double y, const CurvePoint& q,
                 const IntegratorOptions& opts = {});

/// Xi(y, Q) = A(y, eps_pm Q) + A(y, Q).
cplx xi(const Potential& pot, double y, const CurvePoint& q,
        const IntegratorOptions& opts = {});

/// Large-|lambda| field reconstruction from the Weyl function:
/// psi(x) ~ -i lambda X at lambda = -i tau (sheet minus) and
/// conj(psi)(x) ~ i lambda / X at lambda = +i tau (sheet plus).
std::pair<cplx, cplx> recover_field(const Potential& pot, double x, double tau,
                                    const IntegratorOptions& opts = {});

}  // namespace nlsb
