#include "nlsb/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nlsb {

namespace {

constexpr double kOnAxisTol = 1e-12;  // |Im lambda| * l below this is on-axis

double real_checked(cplx z, const char* what) {
  if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z.real())))
    throw Error(std::string(what) + ": unexpected imaginary part");
  return z.real();
}

}  // namespace

Discriminant discriminant(const Potential& pot, cplx lambda,
                          const IntegratorOptions& opts) {
  const auto [tm, dm] =
      monodromy_with_lambda_derivative(pot, -pot.half_period(), lambda, opts);
  return Discriminant{0.5 * tm.m.trace(), 0.5 * dm.trace()};
}

std::pair<cplx, cplx> floquet_roots(cplx delta) {
  const cplx s = std::sqrt(delta * delta - 1.0);
  // Pick the sign that avoids cancellation; the two roots multiply to 1.
  const cplx big = (std::abs(delta + s) >= std::abs(delta - s)) ? delta + s
                                                                : delta - s;
  return {big, 1.0 / big};
}

CurvePoint floquet_multiplier(const Potential& pot, cplx lambda, Sheet sheet,
                              const IntegratorOptions& opts,
                              double branch_tol) {
  const double l = pot.half_period();
  if (std::abs(lambda.imag()) * l <= kOnAxisTol)
    throw AmbiguousSheetError(
        "sheet selection by |w| needs Im lambda != 0; use "
        "floquet_multiplier_tracked for on-axis lambda");
  const cplx delta = discriminant(pot, lambda, opts).delta;
  if (std::abs(delta * delta - 1.0) <= branch_tol * (1.0 + std::norm(delta)))
    throw BranchPointError("lambda is at (or too close to) a branch point");
  const auto [big, small] = floquet_roots(delta);
  // Sheet plus ~ exp(+i lambda l): decaying above the axis, growing below.
  const bool plus_is_small = lambda.imag() > 0.0;
  const cplx w = (sheet == Sheet::plus) == plus_is_small ? small : big;
  return CurvePoint{lambda, w, -l};
}

namespace {

struct TrackedBranches {
  cplx w1, w2;     // branch 1 starts on the requested sheet
  cplx lw1, lw2;   // continuously tracked log of each branch
};

// Advance both branches from `a` (state br) to `b`; subdivides until the
// nearest-root assignment is unambiguous and the log increment is principal.
void track_segment(const Potential& pot, cplx a, TrackedBranches& br, cplx b,
                   const IntegratorOptions& opts, int depth) {
  const cplx delta = discriminant(pot, b, opts).delta;
  const auto [r1, r2] = floquet_roots(delta);
  const double d_keep = std::abs(br.w1 - r1) + std::abs(br.w2 - r2);
  const double d_swap = std::abs(br.w1 - r2) + std::abs(br.w2 - r1);
  const cplx n1 = d_keep <= d_swap ? r1 : r2;
  const cplx n2 = d_keep <= d_swap ? r2 : r1;
  const double sep = std::abs(r1 - r2);
  const double moved =
      std::max(std::abs(br.w1 - n1), std::abs(br.w2 - n2));
  const cplx inc1 = std::log(n1 / br.w1);
  const cplx inc2 = std::log(n2 / br.w2);
  const bool safe = moved <= 0.25 * sep && std::abs(inc1) < 1.0 &&
                    std::abs(inc2) < 1.0;
  if (!safe) {
    if (depth >= 48)
      throw BranchPointError(
          "multiplier tracking failed: path passes too close to a branch "
          "point");
    const cplx mid = 0.5 * (a + b);
    track_segment(pot, a, br, mid, opts, depth + 1);
    track_segment(pot, mid, br, b, opts, depth + 1);
    return;
  }
  br.lw1 += inc1;
  br.lw2 += inc2;
  br.w1 = n1;
  br.w2 = n2;
}

TrackedBranches track_path(const Potential& pot, const std::vector<cplx>& path,
                           Sheet sheet_at_anchor,
                           const IntegratorOptions& opts) {
  if (path.size() < 2) throw ConfigError("tracking path needs >= 2 points");
  const double l = pot.half_period();
  const cplx anchor = path.front();
  if (std::abs(anchor.imag()) * l <= kOnAxisTol)
    throw AmbiguousSheetError("tracking path must start off the real axis");
  const cplx delta = discriminant(pot, anchor, opts).delta;
  const auto [big, small] = floquet_roots(delta);
  const bool plus_is_small = anchor.imag() > 0.0;
  TrackedBranches br;
  br.w1 = (sheet_at_anchor == Sheet::plus) == plus_is_small ? small : big;
  br.w2 = (br.w1 == big) ? small : big;
  br.lw1 = std::log(br.w1);
  br.lw2 = std::log(br.w2);
  for (std::size_t j = 0; j + 1 < path.size(); ++j)
    track_segment(pot, path[j], br, path[j + 1], opts, 0);
  return br;
}

}  // namespace

CurvePoint floquet_multiplier_tracked(const Potential& pot,
                                      const std::vector<cplx>& path,
                                      Sheet sheet_at_anchor,
                                      const IntegratorOptions& opts) {
  const TrackedBranches br = track_path(pot, path, sheet_at_anchor, opts);
  return CurvePoint{path.back(), br.w1, -pot.half_period()};
}

cplx omega(const CurvePoint& q, double pole_tol) {
  const cplx w2 = q.w * q.w;
  if (std::abs(w2 - 1.0) <= pole_tol * (1.0 + std::abs(w2)))
    throw BranchPointError("Omega pole: w^2 = 1 (branch point)");
  return (w2 + 1.0) / (w2 - 1.0);
}

cplx dw_dDelta(const CurvePoint& q, double pole_tol) {
  const cplx w2 = q.w * q.w;
  if (std::abs(w2 - 1.0) <= pole_tol * (1.0 + std::abs(w2)))
    throw BranchPointError("dw/dDelta pole: w^2 = 1 (branch point)");
  return 2.0 * w2 / (w2 - 1.0);
}

std::vector<SpectrumPoint> SpectrumReport::all_points_sorted() const {
  std::vector<SpectrumPoint> all = periodic_points;
  all.insert(all.end(), antiperiodic_points.begin(), antiperiodic_points.end());
  std::sort(all.begin(), all.end(),
            [](const SpectrumPoint& a, const SpectrumPoint& b) {
              return a.lambda < b.lambda;
            });
  return all;
}

namespace {

struct DeltaEval {
  double delta;
  double delta_prime;
};

DeltaEval eval_delta(const Potential& pot, double lambda,
                     const IntegratorOptions& opts) {
  const Discriminant d = discriminant(pot, lambda, opts);
  return {real_checked(d.delta, "Delta on the real axis"),
          real_checked(d.delta_prime, "Delta' on the real axis")};
}

// Safeguarded Newton for Delta(lambda) = s inside a sign-change bracket.
// Returns the root, or nullopt on failure.
std::optional<double> refine_root(const Potential& pot, double a, double b,
                                  double fa, double fb, double s,
                                  const IntegratorOptions& opts) {
  double x = 0.5 * (a + b);
  for (int it = 0; it < 80; ++it) {
    const DeltaEval e = eval_delta(pot, x, opts);
    const double f = e.delta - s;
    if (std::abs(f) < 1e-13 || b - a < 1e-14 * (1.0 + std::abs(x))) return x;
    if ((f < 0.0) == (fa < 0.0)) {
      a = x;
      fa = f;
    } else {
      b = x;
      fb = f;
    }
    double next = x - f / e.delta_prime;
    if (!(next > a && next < b) || e.delta_prime == 0.0) next = 0.5 * (a + b);
    x = next;
  }
  return std::nullopt;
}

// Bisection for a zero of Delta' inside a sign-change bracket.
double refine_extremum(const Potential& pot, double a, double b, double dpa,
                       const IntegratorOptions& opts) {
  for (int it = 0; it < 60 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
    const double mid = 0.5 * (a + b);
    const double dpm = eval_delta(pot, mid, opts).delta_prime;
    if ((dpm < 0.0) == (dpa < 0.0)) {
      a = mid;
      dpa = dpm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SpectrumReport periodic_spectrum(const Potential& pot, double lo, double hi,
                                 int resolution,
                                 const IntegratorOptions& opts,
                                 double class_tol_base) {
  if (!(hi > lo)) throw ConfigError("empty spectral scan range");
  if (resolution < 2) throw ConfigError("scan resolution too coarse");
  const double l = pot.half_period();
  const double target_h = std::numbers::pi / l / resolution;
  const std::size_t cells =
      static_cast<std::size_t>(std::ceil((hi - lo) / target_h));
  const double h = (hi - lo) / static_cast<double>(cells);

  std::vector<double> node(cells + 1), dval(cells + 1), dpr(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    node[j] = lo + h * static_cast<double>(j);
    const DeltaEval e = eval_delta(pot, node[j], opts);
    dval[j] = e.delta;
    dpr[j] = e.delta_prime;
  }

  SpectrumReport rep;
  rep.range_lo = lo;
  rep.range_hi = hi;

  const double dedupe = 1e-8 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
  auto push_point = [&](std::vector<SpectrumPoint>& dst, double lam, bool anti,
                        PointClass cls, double dprime) {
    for (const SpectrumPoint& p : dst)
      if (std::abs(p.lambda - lam) < dedupe) return;
    dst.push_back(SpectrumPoint{lam, anti, cls, dprime});
  };

  for (const double s : {1.0, -1.0}) {
    const bool anti = s < 0.0;
    auto& dst = anti ? rep.antiperiodic_points : rep.periodic_points;
    for (std::size_t j = 0; j < cells; ++j) {
      const double fa = dval[j] - s, fb = dval[j + 1] - s;
      if (fa == 0.0) {
        const double dp = std::abs(dpr[j]);
        push_point(dst, node[j], anti,
                   dp <= class_tol_base ? PointClass::double_point
                                        : PointClass::simple,
                   dp);
        continue;
      }
      if (fa * fb >= 0.0) continue;
      const auto root =
          refine_root(pot, node[j], node[j + 1], fa, fb, s, opts);
      if (!root) {
        rep.unresolved.emplace_back(node[j], node[j + 1]);
        continue;
      }
      const DeltaEval e = eval_delta(pot, *root, opts);
      // Curvature-scaled tolerance separating simple from double roots.
      const double curv =
          std::abs(eval_delta(pot, *root + 0.5 * h, opts).delta_prime -
                   eval_delta(pot, *root - 0.5 * h, opts).delta_prime) /
          h;
      const double ctol = class_tol_base * (1.0 + curv);
      push_point(dst, *root, anti,
                 std::abs(e.delta_prime) <= ctol ? PointClass::double_point
                                                 : PointClass::simple,
                 std::abs(e.delta_prime));
    }
  }

  // Tangential roots: extrema of Delta where |Delta| touches 1 without a
  // sign change of Delta -+ 1 on the grid.
  for (std::size_t j = 0; j < cells; ++j) {
    if (dpr[j] == 0.0 || dpr[j] * dpr[j + 1] >= 0.0) continue;
    const double le = refine_extremum(pot, node[j], node[j + 1], dpr[j], opts);
    const double de = eval_delta(pot, le, opts).delta;
    const double s = de >= 0.0 ? 1.0 : -1.0;
    const double overshoot = (de - s) * s;  // > 0 when |Delta| exceeds 1
    const double fd = 0.5 * h;
    const double curv =
        std::abs(eval_delta(pot, le + fd, opts).delta_prime -
                 eval_delta(pot, le - fd, opts).delta_prime) /
        (2.0 * fd);
    const double curv_safe = std::max(curv, 1e-12);
    if (std::abs(de - s) > 0.5) continue;  // extremum far from +-1: interiors
    const bool anti = s < 0.0;
    auto& dst = anti ? rep.antiperiodic_points : rep.periodic_points;
    const double eta = std::sqrt(std::max(overshoot, 0.0) * 2.0 / curv_safe);
    const double eta_split = class_tol_base * (1.0 + curv) / curv_safe;
    if (eta > eta_split) {
      // Tiny open gap: polish the two nearby simple roots from local seeds.
      for (const double seed : {le - eta, le + eta}) {
        double x = seed;
        bool ok = false;
        for (int it = 0; it < 50; ++it) {
          const DeltaEval e = eval_delta(pot, x, opts);
          const double f = e.delta - s;
          if (std::abs(e.delta_prime) < 1e-300) break;
          const double step = f / e.delta_prime;
          x -= step;
          if (std::abs(step) < 1e-14 * (1.0 + std::abs(x))) {
            ok = true;
            break;
          }
        }
        if (ok) {
          const double dp = std::abs(eval_delta(pot, x, opts).delta_prime);
          push_point(dst, x, anti,
                     dp <= class_tol_base * (1.0 + curv)
                         ? PointClass::double_point
                         : PointClass::simple,
                     dp);
        } else {
          rep.unresolved.emplace_back(le - eta, le + eta);
        }
      }
    } else {
      push_point(dst, le, anti, PointClass::double_point,
                 std::abs(eval_delta(pot, le, opts).delta_prime));
    }
  }

  std::sort(rep.periodic_points.begin(), rep.periodic_points.end(),
            [](const SpectrumPoint& a, const SpectrumPoint& b) {
              return a.lambda < b.lambda;
            });
  std::sort(rep.antiperiodic_points.begin(), rep.antiperiodic_points.end(),
            [](const SpectrumPoint& a, const SpectrumPoint& b) {
              return a.lambda < b.lambda;
            });

  // Gap assembly: consecutive simple points of the same kind whose midpoint
  // lies outside the bands (|Delta| > 1).
  const std::vector<SpectrumPoint> all = rep.all_points_sorted();
  for (std::size_t j = 0; j + 1 < all.size(); ++j) {
    const SpectrumPoint& a = all[j];
    const SpectrumPoint& b = all[j + 1];
    if (a.cls != PointClass::simple || b.cls != PointClass::simple) continue;
    if (a.antiperiodic != b.antiperiodic) continue;
    const double mid = 0.5 * (a.lambda + b.lambda);
    if (std::abs(eval_delta(pot, mid, opts).delta) > 1.0)
      rep.gaps.push_back(Gap{a.lambda, b.lambda});
  }
  return rep;
}

cplx quasimomentum(const Potential& pot, const CurvePoint& q,
                   std::vector<cplx> path, const IntegratorOptions& opts) {
  const double l = pot.half_period();
  if (path.empty()) {
    // Vertical descent from a purely imaginary anchor (where the principal
    // log of w is the correct branch on both sheets), with a horizontal leg
    // to reach Re lambda(Q).
    const double side = q.lambda.imag() < 0.0 ? -1.0 : 1.0;
    const double t =
        std::max(8.0 / l, std::abs(q.lambda.imag()) + 1.0 / l);
    const cplx anchor(0.0, side * t);
    const cplx corner(q.lambda.real(), side * t);
    path.push_back(anchor);
    const double horiz = std::abs(q.lambda.real());
    if (horiz > 0.0) {
      const int n = std::max(8, static_cast<int>(std::ceil(3.0 * l * horiz)));
      for (int j = 1; j <= n; ++j)
        path.push_back(anchor + (corner - anchor) * (double(j) / n));
    }
    const int m = std::max(
        8, static_cast<int>(std::ceil(3.0 * std::abs(corner - q.lambda))));
    for (int j = 1; j <= m; ++j)
      path.push_back(corner + (q.lambda - corner) * (double(j) / m));
  }
  if (std::abs(path.back() - q.lambda) >
      1e-9 * (1.0 + std::abs(q.lambda)))
    throw ConfigError("tracking path must end at lambda(Q)");

  // The sheet at the anchor is irrelevant: both branches are tracked and the
  // one matching w(Q) at the endpoint is selected.
  const TrackedBranches br = track_path(pot, path, Sheet::plus, opts);
  const double wtol = 1e-6 * (1.0 + std::abs(q.w));
  cplx lw;
  if (std::abs(br.w1 - q.w) <= wtol)
    lw = br.lw1;
  else if (std::abs(br.w2 - q.w) <= wtol)
    lw = br.lw2;
  else
    throw AmbiguousSheetError(
        "neither tracked multiplier branch matches w(Q) at the path end");
  return lw / (cplx(0.0, 2.0) * l);
}

double hadamard_residual(const Potential& pot, double lambda, int truncation_n,
                         const IntegratorOptions& opts) {
  if (truncation_n < 1) throw ConfigError("truncation order must be >= 1");
  const double l = pot.half_period();
  const double unit = std::numbers::pi / l;
  const double lo = -(truncation_n + 0.5) * unit;
  const double hi = (truncation_n + 0.5) * unit;
  const SpectrumReport rep = periodic_spectrum(pot, lo, hi, 16, opts);

  std::vector<double> pts;  // with multiplicity
  for (const SpectrumPoint& p : rep.all_points_sorted()) {
    pts.push_back(p.lambda);
    if (p.cls == PointClass::double_point) pts.push_back(p.lambda);
  }
  const std::size_t expect = 2 * (2 * static_cast<std::size_t>(truncation_n) + 1);
  if (pts.size() != expect)
    throw Error("spectral point count mismatch in the product expansion");
  std::sort(pts.begin(), pts.end());

  double log_abs = 0.0;
  double phase_sign = 1.0;
  for (int k = -truncation_n; k <= truncation_n; ++k) {
    const std::size_t j = 2 * static_cast<std::size_t>(k + truncation_n);
    const double ak = (k == 0) ? 1.0 / l : unit * k;
    const double f = (pts[j] - lambda) * (pts[j + 1] - lambda) / (ak * ak);
    if (f == 0.0) {
      log_abs = -std::numeric_limits<double>::infinity();
      continue;
    }
    log_abs += std::log(std::abs(f));
    if (f < 0.0) phase_sign = -phase_sign;
  }
  const double prod =
      std::isinf(log_abs) ? 0.0 : phase_sign * std::exp(log_abs);
  const double delta = eval_delta(pot, lambda, opts).delta;
  return std::abs(delta * delta - 1.0 + prod);
}

std::vector<DivisorPoint> divisor(const Potential& pot, double y,
                                  const SpectrumReport& report,
                                  const IntegratorOptions& opts,
                                  double root_tol) {
  std::vector<DivisorPoint> out;
  int gap_index = 0;
  for (const Gap& g : report.gaps) {
    const double width = g.hi - g.lo;
    if (!(width > 0.0)) {
      ++gap_index;
      continue;
    }

    auto entries = [&](cplx mu) {
      return monodromy_with_lambda_derivative(pot, y, mu, opts);
    };

    // Coarse scan of |M12 - M11 + w| over the gap interior, both w-roots.
    const int samples = 48;
    double best = std::numeric_limits<double>::infinity();
    double best_mu = 0.5 * (g.lo + g.hi);
    cplx best_w = 1.0;
    for (int j = 1; j < samples; ++j) {
      const double mu =
          g.lo + width * static_cast<double>(j) / static_cast<double>(samples);
      const auto [tm, dm] = entries(mu);
      const cplx delta = 0.5 * tm.m.trace();
      const auto [big, small] = floquet_roots(delta);
      for (const cplx& w : {big, small}) {
        const double r = std::abs(tm.m(0, 1) - tm.m(0, 0) + w);
        if (r < best) {
          best = r;
          best_mu = mu;
          best_w = w;
        }
      }
    }

    // Newton in complex mu on D(mu) = M12 - M11 + w(mu), branch followed by
    // continuity; the limit is projected back to the real axis.
    cplx mu = best_mu;
    cplx w_prev = best_w;
    bool converged = false;
    double resid = best;
    for (int it = 0; it < 60; ++it) {
      const auto [tm, dm] = entries(mu);
      const cplx delta = 0.5 * tm.m.trace();
      const cplx delta_prime = 0.5 * dm.trace();
      const auto [big, small] = floquet_roots(delta);
      const cplx w =
          std::abs(big - w_prev) <= std::abs(small - w_prev) ? big : small;
      w_prev = w;
      const cplx d = tm.m(0, 1) - tm.m(0, 0) + w;
      resid = std::abs(d);
      const double scale =
          1.0 + std::abs(tm.m(0, 0)) + std::abs(tm.m(0, 1)) + std::abs(w);
      if (resid <= root_tol * scale) {
        converged = true;
        break;
      }
      const cplx denom = w - delta;
      if (std::abs(denom) < 1e-300)
        throw DegenerateDivisorError("divisor root ran into a branch point");
      const cplx dd =
          (dm(0, 1) - dm(0, 0)) + (w / denom) * delta_prime;
      if (std::abs(dd) < 1e-300)
        throw DegenerateDivisorError("stationary divisor condition");
      mu -= d / dd;
    }
    if (!converged)
      throw DegenerateDivisorError(
          "divisor search did not converge in a gap");
    if (std::abs(mu.imag()) > 1e-6 * (1.0 + std::abs(mu.real())))
      throw DegenerateDivisorError("divisor root left the real axis");
    const double mu_real = mu.real();
    const double edge = std::min(mu_real - g.lo, g.hi - mu_real);
    const bool degenerate =
        edge <= 1e-6 * width || std::abs(w_prev * w_prev - 1.0) <= 1e-8;
    out.push_back(DivisorPoint{CurvePoint{mu_real, w_prev, y}, gap_index,
                               degenerate, resid});
    ++gap_index;
  }
  return out;
}

}  // namespace nlsb
