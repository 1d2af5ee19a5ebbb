#include "nlsb/bracket.hpp"

#include <cmath>
#include <complex>

namespace nlsb {

namespace {

cplx quad_sum(const std::vector<cplx>& vals, double h, Quadrature quad) {
  const std::size_t n = vals.size();
  if (n < 2) throw ConfigError("quadrature needs at least two nodes");
  if (quad == Quadrature::trapezoid) {
    cplx s = 0.5 * (vals.front() + vals.back());
    for (std::size_t j = 1; j + 1 < n; ++j) s += vals[j];
    return s * h;
  }
  if ((n - 1) % 2 != 0)
    throw ConfigError("Simpson quadrature needs an even panel count");
  cplx s = vals.front() + vals.back();
  for (std::size_t j = 1; j + 1 < n; ++j)
    s += vals[j] * (j % 2 == 1 ? 4.0 : 2.0);
  return s * (h / 3.0);
}

const cplx kI(0.0, 1.0);

}  // namespace

cplx poisson_bracket(const GradientField& f, const GradientField& g,
                     Quadrature quad) {
  if (!f.same_grid(g)) throw GridMismatchError("bracket gradients differ");
  const std::size_t n = f.size();
  std::vector<cplx> integrand(n);
  for (std::size_t j = 0; j < n; ++j)
    integrand[j] =
        f.g_psibar[j] * g.g_psi[j] - f.g_psi[j] * g.g_psibar[j];
  const double h = (f.x - f.y) / static_cast<double>(n - 1);
  return 2.0 * kI * quad_sum(integrand, h, quad);
}

MonodromyGradients monodromy_gradients(const Potential& pot, double x,
                                       cplx lambda, std::size_t grid,
                                       const IntegratorOptions& opts) {
  const double x1 = x + 2.0 * pot.half_period();
  const auto [tm, dm] =
      transition_with_lambda_derivative(pot, x1, x, lambda, opts);
  MonodromyGradients c;
  c.x = x;
  c.lambda = lambda;
  c.m = tm.m;
  c.dm_dlambda = dm;
  c.grads = gradient_transition(pot, x1, x, lambda, grid, opts);
  return c;
}

GradientField grad_monodromy_entry(const Potential& pot, double x, cplx lambda,
                                   int i, int j, std::size_t grid,
                                   const IntegratorOptions& opts) {
  return gradient_transition(pot, x + 2.0 * pot.half_period(), x, lambda, grid,
                             opts)
      .entry(i, j);
}

GradientField grad_w(const MonodromyGradients& c, const CurvePoint& q) {
  const cplx factor = 0.5 * dw_dDelta(q);
  GradientField g = c.grads.entry(0, 0) + c.grads.entry(1, 1);
  g *= factor;
  return g;
}

cplx weyl_value(const MonodromyGradients& c, const CurvePoint& q) {
  return (q.w - c.m(0, 0)) / c.m(0, 1);
}

GradientField grad_weyl(const MonodromyGradients& c, const CurvePoint& q) {
  const cplx x = weyl_value(c, q);
  GradientField g = grad_w(c, q) - c.grads.entry(0, 0) -
                    x * c.grads.entry(0, 1);
  g *= 1.0 / c.m(0, 1);
  return g;
}

cplx a_value(const MonodromyGradients& c, const CurvePoint& q) {
  const cplx den = c.m(0, 1) - c.m(0, 0) + q.w;
  if (std::abs(den) <=
      1e-12 * (1.0 + c.m.cwiseAbs().maxCoeff() + std::abs(q.w)))
    throw PoleError("A evaluated at a divisor pole");
  return c.m(0, 1) / den;
}

GradientField grad_A(const MonodromyGradients& c, const CurvePoint& q) {
  const cplx den = c.m(0, 1) - c.m(0, 0) + q.w;
  const cplx a = a_value(c, q);
  GradientField gden =
      c.grads.entry(0, 1) - c.grads.entry(0, 0) + grad_w(c, q);
  gden *= -a / den;
  GradientField g = (cplx(1.0) / den) * c.grads.entry(0, 1) + gden;
  return g;
}

double verify_quartic_identity(const Potential& pot, cplx lambda, cplx mu,
                               double x0, double x1, int samples, double fd_h,
                               const IntegratorOptions& opts) {
  if (lambda == mu) throw ConfigError("quartic identity needs lambda != mu");
  const Matrix2c full_l = transition_matrix(pot, x1, x0, lambda, opts).m;
  const Matrix2c full_u = transition_matrix(pot, x1, x0, mu, opts).m;

  struct Quartet {
    Eigen::Vector2cd fp, gp;     // column solutions at lambda, mu
    Eigen::RowVector2cd fm, gm;  // row solutions at lambda, mu
  };
  auto at = [&](double x) {
    const Matrix2c ml = transition_matrix(pot, x, x0, lambda, opts).m;
    const Matrix2c mu_m = transition_matrix(pot, x, x0, mu, opts).m;
    Matrix2c adj_l, adj_u;
    adj_l << ml(1, 1), -ml(0, 1), -ml(1, 0), ml(0, 0);
    adj_u << mu_m(1, 1), -mu_m(0, 1), -mu_m(1, 0), mu_m(0, 0);
    Quartet qt;
    qt.fp = ml.col(0);
    qt.gp = mu_m.col(1);
    qt.fm = (full_l * adj_l).row(0);
    qt.gm = (full_u * adj_u).row(0);
    return qt;
  };
  auto scalar = [](const Quartet& qt) {
    return (qt.fm * qt.gp)(0) * (qt.gm * qt.fp)(0);
  };

  double worst = 0.0;
  for (int s = 1; s <= samples; ++s) {
    const double x =
        x0 + (x1 - x0) * static_cast<double>(s) / (samples + 1.0);
    const Quartet qt = at(x);
    const cplx lhs = qt.fp(1) * qt.fm(0) * qt.gp(0) * qt.gm(1) -
                     qt.fp(0) * qt.fm(1) * qt.gp(1) * qt.gm(0);
    const cplx rhs = (scalar(at(x + fd_h)) - scalar(at(x - fd_h))) /
                     (2.0 * fd_h) / (kI * (lambda - mu));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return worst;
}

RpbReport verify_rpb(const Potential& pot, cplx lambda, cplx mu, double x,
                     std::size_t grid, Quadrature quad,
                     const IntegratorOptions& opts) {
  if (lambda == mu) throw ConfigError("entry brackets need lambda != mu");
  const MonodromyGradients cl = monodromy_gradients(pot, x, lambda, grid, opts);
  const MonodromyGradients cu = monodromy_gradients(pot, x, mu, grid, opts);
  const Matrix2c& a = cl.m;
  const Matrix2c& b = cu.m;
  const cplx k = -2.0;
  const cplx dl = lambda - mu;

  struct Pair {
    int i1, j1, i2, j2;
    cplx rhs;
  };
  const std::array<Pair, 6> pairs = {{
      {0, 0, 0, 1, k * (a(0, 1) * b(0, 0) - b(0, 1) * a(0, 0)) / dl},
      {0, 0, 1, 0, k * (a(0, 0) * b(1, 0) - b(0, 0) * a(1, 0)) / dl},
      {0, 0, 1, 1, k * (a(0, 1) * b(1, 0) - b(0, 1) * a(1, 0)) / dl},
      {0, 1, 1, 0, k * (a(0, 0) * b(1, 1) - b(0, 0) * a(1, 1)) / dl},
      {0, 1, 1, 1, k * (a(0, 1) * b(1, 1) - b(0, 1) * a(1, 1)) / dl},
      {1, 0, 1, 1, k * (a(1, 1) * b(1, 0) - b(1, 1) * a(1, 0)) / dl},
  }};

  RpbReport rep{};
  rep.max_residual = 0.0;
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    const Pair& p = pairs[n];
    const cplx lhs = poisson_bracket(cl.grads.entry(p.i1, p.j1),
                                     cu.grads.entry(p.i2, p.j2), quad);
    const double res = std::abs(lhs - p.rhs) / (1.0 + std::abs(p.rhs));
    rep.checks[n] = IdentityCheck{lhs, p.rhs, res};
    rep.max_residual = std::max(rep.max_residual, res);
  }
  // The vanishing brackets are measured relative to the natural scale of the
  // non-vanishing ones, |a b / (lambda - mu)|; an absolute measure would only
  // report the roundoff floor when the monodromy entries are large.
  rep.vanishing[0] =
      std::abs(poisson_bracket(cl.grads.entry(0, 0), cu.grads.entry(0, 0),
                               quad)) /
      (1.0 + std::abs(a(0, 0) * b(0, 0) / dl));
  rep.vanishing[1] =
      std::abs(poisson_bracket(cl.grads.entry(0, 1), cu.grads.entry(0, 1),
                               quad)) /
      (1.0 + std::abs(a(0, 1) * b(0, 1) / dl));
  rep.max_residual =
      std::max({rep.max_residual, rep.vanishing[0], rep.vanishing[1]});
  return rep;
}

IdentityCheck verify_deformed_ah(const Potential& pot, double x,
                                 const CurvePoint& q, const CurvePoint& p,
                                 std::size_t grid, Quadrature quad,
                                 const IntegratorOptions& opts) {
  const MonodromyGradients cq =
      monodromy_gradients(pot, x, q.lambda, grid, opts);
  const MonodromyGradients cp =
      monodromy_gradients(pot, x, p.lambda, grid, opts);
  const cplx xq = weyl_value(cq, q);
  const cplx xp = weyl_value(cp, p);
  const cplx lhs = poisson_bracket(grad_weyl(cq, q), grad_weyl(cp, p), quad);
  const cplx diff = xq - xp;
  const cplx rhs = -2.0 * diff * diff / (q.lambda - p.lambda) *
                   (omega(q) + omega(p)) / 2.0;
  return IdentityCheck{lhs, rhs, std::abs(lhs - rhs) / (1.0 + std::abs(rhs))};
}

IdentityCheck verify_A_bracket(const Potential& pot, double x,
                               const CurvePoint& q, const CurvePoint& p,
                               std::size_t grid, Quadrature quad,
                               const IntegratorOptions& opts) {
  const MonodromyGradients cq =
      monodromy_gradients(pot, x, q.lambda, grid, opts);
  const MonodromyGradients cp =
      monodromy_gradients(pot, x, p.lambda, grid, opts);
  const cplx aq = a_value(cq, q);
  const cplx ap = a_value(cp, p);
  const cplx lhs = poisson_bracket(grad_A(cq, q), grad_A(cp, p), quad);
  const cplx diff = aq - ap;
  const cplx rhs = -2.0 * diff * diff / (q.lambda - p.lambda) *
                   (omega(q) + omega(p)) / 2.0;
  return IdentityCheck{lhs, rhs, std::abs(lhs - rhs) / (1.0 + std::abs(rhs))};
}

PopdReport verify_popd(const Potential& pot, double x, const CurvePoint& q,
                       const CurvePoint& p, std::size_t grid, Quadrature quad,
                       const IntegratorOptions& opts) {
  const MonodromyGradients cq =
      monodromy_gradients(pot, x, q.lambda, grid, opts);
  const MonodromyGradients cp =
      monodromy_gradients(pot, x, p.lambda, grid, opts);
  const CurvePoint qs = q.sheet_swapped();
  const CurvePoint ps = p.sheet_swapped();

  const cplx wq = a_value(cq, qs) - a_value(cq, q);
  const cplx wp = a_value(cp, ps) - a_value(cp, p);
  const cplx xiq = a_value(cq, qs) + a_value(cq, q);
  const cplx xip = a_value(cp, ps) + a_value(cp, p);
  const GradientField gwq = grad_A(cq, qs) - grad_A(cq, q);
  const GradientField gwp = grad_A(cp, ps) - grad_A(cp, p);
  const GradientField gxiq = grad_A(cq, qs) + grad_A(cq, q);
  const GradientField gxip = grad_A(cp, ps) + grad_A(cp, p);

  const cplx om_q = omega(q);
  const cplx om_p = omega(p);
  const cplx dl = q.lambda - p.lambda;

  const cplx lhs_ww = poisson_bracket(gwq, gwp, quad);
  const cplx rhs_ww = -2.0 * (xiq - xip) * (wp * om_q - wq * om_p) / dl;
  const cplx lhs_xi = poisson_bracket(gxiq, gxip, quad);
  const cplx rhs_xi = -2.0 * (xiq - xip) * (wp * om_p - wq * om_q) / dl;

  return PopdReport{
      IdentityCheck{lhs_ww, rhs_ww,
                    std::abs(lhs_ww - rhs_ww) / (1.0 + std::abs(rhs_ww))},
      IdentityCheck{lhs_xi, rhs_xi,
                    std::abs(lhs_xi - rhs_xi) / (1.0 + std::abs(rhs_xi))}};
}

CanonicalReport verify_canonical(const Potential& pot, double y,
                                 const SpectrumReport& spectrum,
                                 double min_gap_width, std::size_t grid,
                                 Quadrature quad,
                                 const IntegratorOptions& opts) {
  SpectrumReport wide = spectrum;
  wide.gaps.clear();
  for (const Gap& g : spectrum.gaps)
    if (g.hi - g.lo >= min_gap_width) wide.gaps.push_back(g);
  if (wide.gaps.empty())
    throw DegenerateDivisorError("no open gap wide enough for the divisor");

  const std::vector<DivisorPoint> divs = divisor(pot, y, wide, opts);
  for (const DivisorPoint& d : divs)
    if (d.degenerate)
      throw DegenerateDivisorError(
          "divisor point at a gap edge: canonical check undefined");

  const double l = pot.half_period();
  const std::size_t n = divs.size();
  std::vector<GradientField> gmu(n), gp(n);
  CanonicalReport rep;
  for (std::size_t k = 0; k < n; ++k) {
    const CurvePoint& pt = divs[k].point;
    rep.mu.push_back(pt.lambda.real());
    const MonodromyGradients c =
        monodromy_gradients(pot, y, pt.lambda, grid, opts);
    const cplx dwdDelta = dw_dDelta(pt);
    const GradientField gw = grad_w(c, pt);
    const GradientField gd =
        c.grads.entry(0, 1) - c.grads.entry(0, 0) + gw;
    const cplx dw_dlambda = dwdDelta * c.delta_prime();
    const cplx dd_dlambda =
        (c.dm_dlambda(0, 1) - c.dm_dlambda(0, 0)) + dw_dlambda;
    if (std::abs(dd_dlambda) < 1e-12)
      throw DegenerateDivisorError("stationary divisor condition");
    gmu[k] = (-1.0 / dd_dlambda) * gd;
    // p moves with the root: delta p = (1/2il)(dw/dlambda delta mu +
    // delta w)/w.
    gp[k] = (1.0 / (2.0 * kI * l)) *
            ((dw_dlambda / pt.w) * gmu[k] + (cplx(1.0) / pt.w) * gw);
  }

  rep.lambda_lambda.resize(n, n);
  rep.p_p.resize(n, n);
  rep.p_lambda.resize(n, n);
  rep.max_residual = 0.0;
  rep.max_residual_scaled = 0.0;
  rep.p_lambda_diagonal = 0.0;
  const cplx scaled_diag = cplx(0.0, 1.0) / pot.half_period();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      rep.lambda_lambda(k, m) = poisson_bracket(gmu[k], gmu[m], quad);
      rep.p_p(k, m) = poisson_bracket(gp[k], gp[m], quad);
      rep.p_lambda(k, m) = poisson_bracket(gp[k], gmu[m], quad);
      const cplx expected = (k == m) ? cplx(1.0) : cplx(0.0);
      const cplx expected_scaled = (k == m) ? scaled_diag : cplx(0.0);
      const double off = std::max(std::abs(rep.lambda_lambda(k, m)),
                                  std::abs(rep.p_p(k, m)));
      rep.max_residual = std::max(
          {rep.max_residual, off, std::abs(rep.p_lambda(k, m) - expected)});
      rep.max_residual_scaled =
          std::max({rep.max_residual_scaled, off,
                    std::abs(rep.p_lambda(k, m) - expected_scaled)});
      if (k == m) rep.p_lambda_diagonal += rep.p_lambda(k, m);
    }
  }
  if (n > 0) rep.p_lambda_diagonal /= static_cast<double>(n);
  return rep;
}

FieldBracketReport verify_field_brackets(const Potential& pot, double z,
                                         const std::function<cplx(double)>& f,
                                         double tau, std::size_t grid,
                                         Quadrature quad,
                                         const IntegratorOptions& opts) {
  const double l = pot.half_period();

  auto weighted_integral = [&](cplx lam_p) {
    // Int_{z-2l}^{z} f(y) exp(-i lam_p (z - y)) dy (Simpson).
    const std::size_t panels = 4096;
    std::vector<cplx> vals(panels + 1);
    const double h = 2.0 * l / static_cast<double>(panels);
    for (std::size_t j = 0; j <= panels; ++j) {
      const double yj = z - 2.0 * l + h * static_cast<double>(j);
      vals[j] = f(yj) * std::exp(-kI * lam_p * (z - yj));
    }
    return quad_sum(vals, h, Quadrature::simpson);
  };

  FieldBracketReport rep{};

  {
    // Both points near P-: lambda = -i tau and -2 i tau, sheet minus.
    const cplx lq(0.0, -tau), lp(0.0, -2.0 * tau);
    const CurvePoint q = floquet_multiplier(pot, lq, Sheet::minus, opts);
    const CurvePoint p = floquet_multiplier(pot, lp, Sheet::minus, opts);
    const MonodromyGradients cq = monodromy_gradients(pot, z, lq, grid, opts);
    const MonodromyGradients cp = monodromy_gradients(pot, z, lp, grid, opts);
    const cplx br = poisson_bracket(grad_weyl(cq, q), grad_weyl(cp, p), quad);
    rep.r_pp = lq * lp * br * weighted_integral(lp);
  }

  {
    // Q near P+ at +i tau, P = eps_a Q near P-.
    const cplx lq(0.0, tau);
    const CurvePoint q = floquet_multiplier(pot, lq, Sheet::plus, opts);
    const CurvePoint p = q.conjugated();
    const MonodromyGradients cq = monodromy_gradients(pot, z, lq, grid, opts);
    const MonodromyGradients cp =
        monodromy_gradients(pot, z, p.lambda, grid, opts);
    const cplx xq = weyl_value(cq, q);
    const cplx br = poisson_bracket(grad_weyl(cq, q), grad_weyl(cp, p), quad);
    rep.r_cross =
        -(lq * p.lambda / (xq * xq)) * br * weighted_integral(p.lambda);
  }

  const cplx fz = f(z);
  if (std::abs(fz) < 1e-300)
    throw ConfigError("test function must not vanish at the base point");
  rep.r_cross_over_f = rep.r_cross / fz;
  rep.dist_to_i = std::abs(rep.r_cross_over_f - kI);
  rep.dist_to_2i = std::abs(rep.r_cross_over_f - 2.0 * kI);
  return rep;
}

}  // namespace nlsb
