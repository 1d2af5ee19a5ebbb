#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nlsb/errors.hpp"

namespace nlsb {

using cplx = std::complex<double>;

/// Sampled functional derivatives of a scalar functional F of the field:
/// g_psi[j] = dF/dpsi(z_j), g_psibar[j] = dF/dconj(psi)(z_j) on the uniform
/// inclusive grid z_j = y + j (x - y)/(n - 1).
struct GradientField {
  double y = 0.0;
  double x = 0.0;
  std::vector<cplx> g_psi;
  std::vector<cplx> g_psibar;

  std::size_t size() const { return g_psi.size(); }
  double grid_point(std::size_t j) const {
    return y + (x - y) * static_cast<double>(j) /
                   static_cast<double>(g_psi.size() - 1);
  }
  bool same_grid(const GradientField& o) const {
    return size() == o.size() && y == o.y && x == o.x;
  }

  GradientField& operator+=(const GradientField& o);
  GradientField& operator-=(const GradientField& o);
  GradientField& operator*=(cplx s);
};

GradientField operator+(GradientField a, const GradientField& b);
GradientField operator-(GradientField a, const GradientField& b);
GradientField operator*(cplx s, GradientField a);

}  // namespace nlsb
