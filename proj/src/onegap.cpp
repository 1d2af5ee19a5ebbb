#include "nlsb/onegap.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nlsb {

OneGapCurve::OneGapCurve(cplx amplitude, int mode, double half_period)
    : alpha_(std::numbers::pi * mode / half_period),
      eta_(2.0 * std::abs(amplitude)),
      l_(half_period),
      n_(mode),
      c_(amplitude) {
  if (!(l_ > 0.0)) throw ConfigError("half period must be positive");
  if (!(eta_ > 0.0)) throw ConfigError("plane-wave amplitude must be nonzero");
}

OneGapCurve OneGapCurve::from_potential(const Potential& pot) {
  const auto& coeffs = pot.coeffs();
  if (coeffs.size() != 1)
    throw ConfigError("closed forms need a single-mode plane-wave potential");
  const auto& [n, c] = *coeffs.begin();
  return OneGapCurve(c, n, pot.half_period());
}

void OneGapCurve::check_pole(cplx z) const {
  if (std::abs(z - alpha_) <= 1e-14 * (1.0 + std::abs(z)))
    throw PoleError("uniformizer pole at z = alpha (the point P-)");
}

std::pair<cplx, cplx> OneGapCurve::uniformize(cplx z) const {
  check_pole(z);
  const cplx u = z - alpha_;
  const cplx q = eta_ * eta_ / (4.0 * u);
  const cplx lambda = z + q;
  const cplx y = cplx(0.0, 1.0) * u + q / cplx(0.0, 1.0);
  return {lambda, y};
}

cplx OneGapCurve::eps_pm(cplx z) const {
  check_pole(z);
  return alpha_ + eta_ * eta_ / (4.0 * (z - alpha_));
}

cplx OneGapCurve::eps_a(cplx z) const {
  check_pole(std::conj(z));
  return alpha_ + eta_ * eta_ / (4.0 * (std::conj(z) - alpha_));
}

cplx OneGapCurve::quasimomentum_z(cplx z) const {
  check_pole(z);
  return 0.5 * (z - eta_ * eta_ / (4.0 * (z - alpha_)));
}

cplx OneGapCurve::multiplier(cplx z) const {
  return std::exp(cplx(0.0, 2.0 * l_) * quasimomentum_z(z));
}

cplx OneGapCurve::discriminant_closed(cplx z) const {
  return std::cos(2.0 * l_ * quasimomentum_z(z));
}

std::pair<cplx, cplx> OneGapCurve::h_functions(cplx z, cplx z_gamma) const {
  const cplx den = z - alpha_ - z_gamma;
  if (std::abs(den) <= 1e-14 * (1.0 + std::abs(z)))
    throw PoleError("h-functions pole: z - alpha = z_gamma");
  return {(z - alpha_) / den, -z_gamma / den};
}

cplx OneGapCurve::z_gamma(double x, double phi_gamma_ref, double x_ref) const {
  return 0.5 * eta_ *
         std::polar(1.0, phi_gamma_ref - alpha_ * (x - x_ref));
}

cplx OneGapCurve::z_gamma_closed(double x) const {
  return cplx(0.0, 1.0) * eta_ * eta_ / (4.0 * c_) *
         std::polar(1.0, -alpha_ * x);
}

cplx OneGapCurve::closed_weyl(double x, cplx z, double phi_gamma_ref,
                              double x_ref) const {
  return -(z - alpha_) / z_gamma(x, phi_gamma_ref, x_ref);
}

cplx OneGapCurve::closed_weyl(double x, cplx z) const {
  return -(z - alpha_) / z_gamma_closed(x);
}

cplx OneGapCurve::z_from_point(const CurvePoint& q, double match_tol) const {
  // u = z - alpha solves u^2 - (lambda - alpha) u + eta^2/4 = 0; the two
  // roots are the two sheets over lambda.
  const cplx b = q.lambda - cplx(alpha_);
  const cplx s = std::sqrt(b * b - cplx(eta_ * eta_));
  cplx u1 = 0.5 * (std::abs(b + s) >= std::abs(b - s) ? b + s : b - s);
  if (std::abs(u1) < 1e-300)
    throw PoleError("curve point sits at the uniformizer pole");
  const cplx u2 = eta_ * eta_ / (4.0 * u1);  // product of roots = eta^2/4
  double best_err = std::numeric_limits<double>::infinity();
  cplx best_z = 0.0;
  for (const cplx& u : {u1, u2}) {
    const cplx z = alpha_ + u;
    const double err = std::abs(multiplier(z) - q.w) / (1.0 + std::abs(q.w));
    if (err < best_err) {
      best_err = err;
      best_z = z;
    }
  }
  if (best_err > match_tol)
    throw AmbiguousSheetError(
        "no uniformizer root reproduces the requested multiplier");
  return best_z;
}

}  // namespace nlsb
