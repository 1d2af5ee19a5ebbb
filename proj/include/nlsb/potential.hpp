#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>

#include "nlsb/errors.hpp"

namespace nlsb {

using cplx = std::complex<double>;

/// Smooth 2l-periodic complex field given by a finite Fourier series
///     psi(x) = sum_k c_k exp(i pi k x / l),   k in [-K..K].
/// Immutable after construction; evaluation is thread safe.
class Potential {
 public:
  /// Zero potential with half-period l.
  explicit Potential(double half_period);

  /// General finite series. Keys are the mode indices k.
  Potential(double half_period, std::map<int, cplx> coeffs);

  /// One-mode plane wave C exp(i pi n x / l).
  static Potential plane_wave(cplx C, int n, double half_period);

  double half_period() const { return l_; }

  /// psi(x)
  cplx eval(double x) const;
  /// conj(psi)(x)
  cplx eval_conj(double x) const { return std::conj(eval(x)); }
  /// psi'(x), term-wise differentiated series
  cplx derivative(double x) const;

  /// Potential translated by a: x -> x + a.
  Potential translated(double a) const;

  bool is_zero() const { return coeffs_.empty(); }
  const std::map<int, cplx>& coeffs() const { return coeffs_; }
  int max_mode() const;

  struct Conserved {
    double h1, h2, h3;
  };

  /// H1 = 1/2 int |psi|^2, H2 = 1/(2i) int psi conj(psi)', H3 = 1/2 int
  /// |psi'|^2 + |psi|^4, all over [-l, l] by periodic trapezoid quadrature.
  Conserved conserved_quantities(std::size_t quad_points = 512) const;

  /// JSON descriptor: { "l": real, "coeffs": [ {"k": int, "re": real, "im": real} ] }
  static Potential from_json_text(const std::string& text);
  std::string to_json_text() const;

 private:
  double l_;
  std::map<int, cplx> coeffs_;
};

}  // namespace nlsb
