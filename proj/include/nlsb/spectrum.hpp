#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlsb/dirac.hpp"
#include "nlsb/potential.hpp"

namespace nlsb {

/// A point Q = (lambda, w) of the spectral curve; the sheet is fixed by
/// storing the Floquet multiplier w, a root of w^2 - 2 Delta w + 1 = 0.
struct CurvePoint {
  cplx lambda;
  cplx w;
  double base_x = 0.0;  // monodromy base point used to build the point

  /// Sheet swap (lambda, w) -> (lambda, 1/w).
  CurvePoint sheet_swapped() const { return {lambda, 1.0 / w, base_x}; }
  /// Antiholomorphic involution (lambda, w) -> (conj lambda, conj w).
  CurvePoint conjugated() const {
    return {std::conj(lambda), std::conj(w), base_x};
  }
};

struct Discriminant {
  cplx delta;
  cplx delta_prime;
};

/// Delta = 1/2 trace M(-l, lambda) and its lambda-derivative.
Discriminant discriminant(const Potential& pot, cplx lambda,
                          const IntegratorOptions& opts = {});

/// Stable roots of w^2 - 2 Delta w + 1 = 0: first the root with |w| >= 1.
std::pair<cplx, cplx> floquet_roots(cplx delta);

enum class Sheet { plus, minus };

/// Sheet plus carries the asymptotics w ~ exp(+i lambda l) as Im lambda ->
/// +infinity; off the real axis the sheets are separated by |w| <> 1.
/// On-axis lambda needs a continuity path (see floquet_multiplier_tracked).
CurvePoint floquet_multiplier(const Potential& pot, cplx lambda, Sheet sheet,
                              const IntegratorOptions& opts = {},
                              double branch_tol = 1e-8);

/// Track both w-branches by continuity along a discretized lambda path whose
/// first entry is off-axis (anchor); returns the curve point at path.back()
/// on the branch that starts on `sheet_at_anchor`.
CurvePoint floquet_multiplier_tracked(const Potential& pot,
                                      const std::vector<cplx>& path,
                                      Sheet sheet_at_anchor,
                                      const IntegratorOptions& opts = {});

/// Deformation factor Omega(Q) = (w^2 + 1)/(w^2 - 1).
cplx omega(const CurvePoint& q, double pole_tol = 1e-10);

/// dw/dDelta = 2 w^2 / (w^2 - 1); satisfies Omega = dw/dDelta - 1.
cplx dw_dDelta(const CurvePoint& q, double pole_tol = 1e-10);

enum class PointClass { simple, double_point };

struct SpectrumPoint {
  double lambda;
  bool antiperiodic;  // Delta = -1 root
  PointClass cls;
  double delta_prime;  // |Delta'| at the root, for diagnostics
};

struct Gap {
  double lo, hi;
};

struct SpectrumReport {
  std::vector<SpectrumPoint> periodic_points;
  std::vector<SpectrumPoint> antiperiodic_points;
  std::vector<Gap> gaps;
  double range_lo = 0.0, range_hi = 0.0;
  std::vector<std::pair<double, double>> unresolved;  // suspicious cells

  std::vector<SpectrumPoint> all_points_sorted() const;
};

/// All roots of Delta -+ 1 in [lo, hi]: sign-change bracketing of Delta -+ 1
/// and of Delta' (to catch tangential double roots), Newton-refined with
/// dDelta/dlambda.
SpectrumReport periodic_spectrum(const Potential& pot, double lo, double hi,
                                 int resolution = 16,
                                 const IntegratorOptions& opts = {},
                                 double class_tol_base = 1e-6);

/// Quasimomentum p with w = exp(2 i l p); the branch of log w is tracked
/// continuously along `path` (default: vertical segment from a large
/// imaginary anchor above/below Re lambda(Q) down to lambda(Q)).
cplx quasimomentum(const Potential& pot, const CurvePoint& q,
                   std::vector<cplx> path = {},
                   const IntegratorOptions& opts = {});

/// |Delta^2 - 1 + prod_{|k|<=N} (lk+ - lambda)(lk- - lambda)/ak^2| with
/// a0 = 1/l, ak = pi k / l.
double hadamard_residual(const Potential& pot, double lambda, int truncation_n,
                         const IntegratorOptions& opts = {});

struct DivisorPoint {
  CurvePoint point;
  int gap_index;
  bool degenerate;  // root at a gap edge within tolerance
  double residual;  // |M12 - M11 + w| at the root
};

/// One pole gamma_k(y) of the Floquet-solution coefficient per open gap:
/// the real mu in [lk-, lk+] and the w-root with M12 - M11 + w = 0 at the
/// monodromy base y.
std::vector<DivisorPoint> divisor(const Potential& pot, double y,
                                  const SpectrumReport& report,
                                  const IntegratorOptions& opts = {},
                                  double root_tol = 1e-8);

}  // namespace nlsb
