#include "nlsb/weyl.hpp"

#include <cmath>
#include <limits>

namespace nlsb {

Projective lft_transform(const Projective& x, cplx a, cplx b, cplx c, cplx d) {
  const double scale =
      (std::abs(a) + std::abs(d)) * (std::abs(a) + std::abs(d)) +
      (std::abs(b) + std::abs(c)) * (std::abs(b) + std::abs(c));
  if (std::abs(a * d - b * c) <= 1e-14 * (1.0 + scale))
    throw DegenerateTransformError("linear-fractional map has ad - bc = 0");
  return Projective{d * x.num + b * x.den, c * x.num + a * x.den};
}

ACoefficient coefficient_A(const Potential& pot, double y, const CurvePoint& q,
                           const IntegratorOptions& opts, double pole_tol) {
  const Matrix2c m = monodromy(pot, y, q.lambda, opts).m;
  const cplx den1 = m(0, 1) - m(0, 0) + q.w;
  const cplx den2 = m(1, 0) - m(1, 1) + q.w;
  const double scale =
      1.0 + m.cwiseAbs().maxCoeff() + std::abs(q.w);
  if (std::abs(den1) <= pole_tol * scale || std::abs(den2) <= pole_tol * scale)
    throw PoleError("coefficient A evaluated at a divisor pole");
  const cplx a1 = m(0, 1) / den1;
  const cplx a2 = (q.w - m(1, 1)) / den2;
  // Pick the expression whose denominator suffers less cancellation.
  const double r1 =
      std::abs(den1) / (std::abs(m(0, 1)) + std::abs(m(0, 0)) + std::abs(q.w));
  const double r2 =
      std::abs(den2) / (std::abs(m(1, 0)) + std::abs(m(1, 1)) + std::abs(q.w));
  return ACoefficient{r1 >= r2 ? a1 : a2, std::abs(a1 - a2)};
}

Eigen::Vector2cd floquet_solution(const Potential& pot, double x, double y,
                                  const CurvePoint& q,
                                  const IntegratorOptions& opts) {
  const cplx a = coefficient_A(pot, y, q, opts).a;
  const Matrix2c m = transition_matrix(pot, x, y, q.lambda, opts).m;
  Eigen::Vector2cd e;
  e(0) = a * m(0, 0) + (1.0 - a) * m(0, 1);
  e(1) = a * m(1, 0) + (1.0 - a) * m(1, 1);
  return e;
}

WeylValue weyl_function(const Potential& pot, double x, const CurvePoint& q,
                        const IntegratorOptions& opts) {
  const Matrix2c m = monodromy(pot, x, q.lambda, opts).m;
  const cplx num1 = q.w - m(0, 0);
  const cplx den1 = m(0, 1);
  const cplx num2 = m(1, 0);
  const cplx den2 = q.w - m(1, 1);
  // Expression 1 subtracts in the numerator, expression 2 in the
  // denominator; keep the one whose subtraction cancels least.
  const double r1 = std::abs(num1) / (std::abs(q.w) + std::abs(m(0, 0)) + 1e-300);
  const double r2 = std::abs(den2) / (std::abs(q.w) + std::abs(m(1, 1)) + 1e-300);
  Projective weyl = r1 >= r2 ? Projective{num1, den1} : Projective{num2, den2};
  const double scale =
      1.0 + std::abs(num1) * std::abs(den2) + std::abs(den1) * std::abs(num2);
  const double resid = std::abs(num1 * den2 - num2 * den1) / scale;

  cplx a(std::numeric_limits<double>::quiet_NaN(), 0.0);
  try {
    a = coefficient_A(pot, x, q, opts).a;
  } catch (const PoleError&) {
    // A has a pole exactly where X is still well defined; keep X.
  }
  return WeylValue{q, x, a, weyl, resid};
}

cplx wronskian_W(const Potential& pot, double y, const CurvePoint& q,
                 const IntegratorOptions& opts) {
  return coefficient_A(pot, y, q.sheet_swapped(), opts).a -
         coefficient_A(pot, y, q, opts).a;
}

cplx xi(const Potential& pot, double y, const CurvePoint& q,
        const IntegratorOptions& opts) {
  return coefficient_A(pot, y, q.sheet_swapped(), opts).a +
         coefficient_A(pot, y, q, opts).a;
}

std::pair<cplx, cplx> recover_field(const Potential& pot, double x, double tau,
                                    const IntegratorOptions& opts) {
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  const cplx lam_minus(0.0, -tau);
  const cplx lam_plus(0.0, tau);
  const CurvePoint qm =
      floquet_multiplier(pot, lam_minus, Sheet::minus, opts);
  const CurvePoint qp = floquet_multiplier(pot, lam_plus, Sheet::plus, opts);
  const cplx xm = weyl_function(pot, x, qm, opts).weyl.value();
  const Projective xp = weyl_function(pot, x, qp, opts).weyl;
  // lambda X -> i psi at P-, lambda / X -> -i conj(psi) at P+.
  const cplx psi = -cplx(0.0, 1.0) * lam_minus * xm;
  const cplx psibar = cplx(0.0, 1.0) * lam_plus * xp.den / xp.num;
  return {psi, psibar};
}

}  // namespace nlsb
