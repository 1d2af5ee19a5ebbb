#pragma once

#include <array>
#include <functional>

#include <Eigen/Core>

#include "nlsb/dirac.hpp"
#include "nlsb/spectrum.hpp"

namespace nlsb {

enum class Quadrature { simpson, trapezoid };

/// {F, G} = 2i Int (dF/dpsibar dG/dpsi - dF/dpsi dG/dpsibar) dx over the
/// shared gradient grid; antisymmetric by construction.
cplx poisson_bracket(const GradientField& f, const GradientField& g,
                     Quadrature quad = Quadrature::simpson);

/// Monodromy at base x with its lambda-derivative and per-entry gradient
/// kernels sampled over one period [x, x + 2l]; shared by the verifiers.
struct MonodromyGradients {
  double x = 0.0;
  cplx lambda;
  Matrix2c m;
  Matrix2c dm_dlambda;
  MatrixGradientField grads;

  cplx delta() const { return 0.5 * m.trace(); }
  cplx delta_prime() const { return 0.5 * dm_dlambda.trace(); }
};

MonodromyGradients monodromy_gradients(const Potential& pot, double x,
                                       cplx lambda, std::size_t grid = 512,
                                       const IntegratorOptions& opts = {});

GradientField grad_monodromy_entry(const Potential& pot, double x, cplx lambda,
                                   int i, int j, std::size_t grid = 512,
                                   const IntegratorOptions& opts = {});

/// grad w = (dw/dDelta) * (grad M11 + grad M22)/2.
GradientField grad_w(const MonodromyGradients& c, const CurvePoint& q);

/// grad X = (grad w - grad M11 - X grad M12)/M12 for X = (w - M11)/M12.
GradientField grad_weyl(const MonodromyGradients& c, const CurvePoint& q);
cplx weyl_value(const MonodromyGradients& c, const CurvePoint& q);

/// grad A = (grad M12 - A (grad M12 - grad M11 + grad w))/D for
/// A = M12 / D, D = M12 - M11 + w.
GradientField grad_A(const MonodromyGradients& c, const CurvePoint& q);
cplx a_value(const MonodromyGradients& c, const CurvePoint& q);

struct IdentityCheck {
  cplx lhs;
  cplx rhs;
  double residual;  // |lhs - rhs| / (1 + |rhs|)
};

/// Pointwise identity for quartic products of column (f+, g+) and row
/// (f-, g-) solutions at lambda and mu:
///   f2+ f1- g1+ g2- - f1+ f2- g2+ g1-
///     = (1/(i(lambda - mu))) d/dx [(f- g+)(g- f+)],
/// the right side differenced at step fd_h; returns the max residual over
/// interior samples.
double verify_quartic_identity(const Potential& pot, cplx lambda, cplx mu,
                               double x0, double x1, int samples = 24,
                               double fd_h = 1e-5,
                               const IntegratorOptions& opts = {});

/// Brackets of transition-matrix entries against the closed forms with
/// K = -2, e.g. {m11(l), m12(u)} = K (m12(l) m11(u) - m12(u) m11(l))/(l-u),
/// plus two brackets that must vanish ({m11,m11} and {m12,m12}).
struct RpbReport {
  std::array<IdentityCheck, 6> checks;
  // |{m11,m11}| and |{m12,m12}|, scaled by the size of the non-vanishing
  // brackets so they read as relative residuals.
  std::array<double, 2> vanishing;
  double max_residual;
};

RpbReport verify_rpb(const Potential& pot, cplx lambda, cplx mu, double x,
                     std::size_t grid = 512,
                     Quadrature quad = Quadrature::simpson,
                     const IntegratorOptions& opts = {});

/// Deformed bracket of the Weyl function at one base point:
/// {X(Q), X(P)} = -2 (X(Q)-X(P))^2/(lambda-mu) * (Omega(Q)+Omega(P))/2.
IdentityCheck verify_deformed_ah(const Potential& pot, double x,
                                 const CurvePoint& q, const CurvePoint& p,
                                 std::size_t grid = 512,
                                 Quadrature quad = Quadrature::simpson,
                                 const IntegratorOptions& opts = {});

/// Same closed form for the first-component coefficient A.
IdentityCheck verify_A_bracket(const Potential& pot, double x,
                               const CurvePoint& q, const CurvePoint& p,
                               std::size_t grid = 512,
                               Quadrature quad = Quadrature::simpson,
                               const IntegratorOptions& opts = {});

/// {W(Q), W(P)} = -2 (Xi(Q)-Xi(P)) (W(P) Om(Q) - W(Q) Om(P))/(lambda-mu),
/// {Xi(Q), Xi(P)} = -2 (Xi(Q)-Xi(P)) (W(P) Om(P) - W(Q) Om(Q))/(lambda-mu),
/// with W = A(eps Q) - A(Q), Xi = A(eps Q) + A(Q).
struct PopdReport {
  IdentityCheck ww;
  IdentityCheck xixi;
};

PopdReport verify_popd(const Potential& pot, double x, const CurvePoint& q,
                       const CurvePoint& p, std::size_t grid = 512,
                       Quadrature quad = Quadrature::simpson,
                       const IntegratorOptions& opts = {});

/// Canonical relations of the divisor variables at base y:
/// {lambda(g_k), lambda(g_n)} = 0, {p(g_k), p(g_n)} = 0,
/// {p(g_k), lambda(g_n)} = delta_kn; gradients of lambda(g_k) by implicit
/// differentiation of M12 - M11 + w = 0.
struct CanonicalReport {
  std::vector<double> mu;          // divisor projections, one per open gap
  Eigen::MatrixXcd lambda_lambda;  // expected 0
  Eigen::MatrixXcd p_p;            // expected 0
  Eigen::MatrixXcd p_lambda;       // expected identity
  double max_residual;             // worst deviation over the three blocks
  cplx p_lambda_diagonal;          // mean of the measured diagonal entries
  // Worst deviation when the diagonal target is i/l instead of 1; the
  // measured pairing is {p(g_k), lambda(g_n)} = (i/l) delta_kn, consistent
  // with {log w(g_k), lambda(g_n)} = -2 delta_kn and the K = -2 constant in
  // the monodromy-entry brackets.
  double max_residual_scaled;
};

CanonicalReport verify_canonical(const Potential& pot, double y,
                                 const SpectrumReport& spectrum,
                                 double min_gap_width = 1e-3,
                                 std::size_t grid = 512,
                                 Quadrature quad = Quadrature::simpson,
                                 const IntegratorOptions& opts = {});

/// Finite-tau emulation of the field-variable brackets through the Weyl
/// function:
///   r_pp    = lQ lP {X(z,Q), X(z,P)} Int f(y) exp(-i lP (z-y)) dy,
///             lQ = -i tau, lP = -2 i tau, both on sheet minus (expected
///             to vanish as tau grows);
///   r_cross = -(lQ lP / X(z,Q)^2) {X(z,Q), X(z,P)} Int f exp(-i lP (z-y)),
///             lQ = +i tau on sheet plus, P = eps_a Q (expected to approach
///             a purely imaginary multiple of f(z)).
struct FieldBracketReport {
  cplx r_pp;
  cplx r_cross;
  cplx r_cross_over_f;  // r_cross / f(z)
  double dist_to_i;     // |r_cross/f(z) - i|
  double dist_to_2i;    // |r_cross/f(z) - 2i|
};

FieldBracketReport verify_field_brackets(
    const Potential& pot, double z, const std::function<cplx(double)>& f,
    double tau, std::size_t grid = 512,
    Quadrature quad = Quadrature::simpson, const IntegratorOptions& opts = {});

}  // namespace nlsb
