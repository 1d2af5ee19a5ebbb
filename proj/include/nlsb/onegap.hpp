#pragma once

#include <utility>

#include "nlsb/potential.hpp"
#include "nlsb/spectrum.hpp"

namespace nlsb {

/// Closed forms for the plane-wave potential psi(x) = C exp(i pi n x / l),
/// whose spectral curve has a single open gap [alpha - eta, alpha + eta],
/// alpha = pi n / l, eta = 2|C|.  The desingularized curve is rational with
/// global uniformizer z: lambda = z + eta^2/(4(z - alpha)).
class OneGapCurve {
 public:
  OneGapCurve(cplx amplitude, int mode, double half_period);

  /// Requires a potential with exactly one Fourier mode.
  static OneGapCurve from_potential(const Potential& pot);

  double alpha() const { return alpha_; }
  double eta() const { return eta_; }
  double half_period() const { return l_; }
  int mode() const { return n_; }
  cplx amplitude() const { return c_; }

  Potential potential() const { return Potential::plane_wave(c_, n_, l_); }

  /// (lambda, y) of the curve point with uniformizer z;
  /// y^2 = eta^2 - (alpha - lambda)^2.
  std::pair<cplx, cplx> uniformize(cplx z) const;

  /// Sheet-permuting involution (lambda, y) -> (lambda, -y) in z.
  cplx eps_pm(cplx z) const;
  /// Antiholomorphic involution (lambda, y) -> (conj lambda, conj y) in z;
  /// its fixed oval is |z - alpha| = eta/2.
  cplx eps_a(cplx z) const;

  /// p(z) = (z - eta^2/(4(z - alpha)))/2; p(z) + p(eps_pm z) = alpha.
  cplx quasimomentum_z(cplx z) const;

  /// Floquet multiplier exp(2 i l p(z)).
  cplx multiplier(cplx z) const;

  /// Discriminant Delta(lambda(z)) = cos(2 l p(z)).
  cplx discriminant_closed(cplx z) const;

  /// h+(z|gamma) = (z-alpha)/(z-alpha-zg), h-(z|gamma) = -zg/(z-alpha-zg);
  /// zg is the oval coordinate of the divisor point, z_gamma = z[gamma]-alpha.
  std::pair<cplx, cplx> h_functions(cplx z, cplx z_gamma) const;

  /// Divisor oval coordinate at base x, from a reference phase:
  /// z_gamma(x) = (eta/2) exp(i (phi_ref - alpha (x - x_ref))).
  cplx z_gamma(double x, double phi_gamma_ref, double x_ref) const;

  /// Divisor oval coordinate from the amplitude alone:
  /// z_gamma(x) = (i eta^2 / (4 C)) exp(-i alpha x).
  cplx z_gamma_closed(double x) const;

  /// X(x, z) = -(z - alpha)/z_gamma(x).
  cplx closed_weyl(double x, cplx z, double phi_gamma_ref, double x_ref) const;
  cplx closed_weyl(double x, cplx z) const;

  /// Uniformizer of a numeric curve point: of the two z with
  /// lambda(z) = lambda, returns the one whose exp(2 i l p(z)) matches w.
  cplx z_from_point(const CurvePoint& q, double match_tol = 1e-5) const;

 private:
  void check_pole(cplx z) const;

  double alpha_;
  double eta_;
  double l_;
  int n_;
  cplx c_;
};

}  // namespace nlsb
