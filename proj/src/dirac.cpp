#include "nlsb/dirac.hpp"

#include <algorithm>
#include <cmath>

namespace nlsb {

GradientField& GradientField::operator+=(const GradientField& o) {
  if (!same_grid(o)) throw GridMismatchError("gradient grids differ");
  for (std::size_t j = 0; j < size(); ++j) {
    g_psi[j] += o.g_psi[j];
    g_psibar[j] += o.g_psibar[j];
  }
  return *this;
}

GradientField& GradientField::operator-=(const GradientField& o) {
  if (!same_grid(o)) throw GridMismatchError("gradient grids differ");
  for (std::size_t j = 0; j < size(); ++j) {
    g_psi[j] -= o.g_psi[j];
    g_psibar[j] -= o.g_psibar[j];
  }
  return *this;
}

GradientField& GradientField::operator*=(cplx s) {
  for (std::size_t j = 0; j < size(); ++j) {
    g_psi[j] *= s;
    g_psibar[j] *= s;
  }
  return *this;
}

GradientField operator+(GradientField a, const GradientField& b) {
  a += b;
  return a;
}
GradientField operator-(GradientField a, const GradientField& b) {
  a -= b;
  return a;
}
GradientField operator*(cplx s, GradientField a) {
  a *= s;
  return a;
}

Matrix2c TransitionMatrix::inverse_unimodular() const {
  Matrix2c inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv;
}

namespace {

Matrix2c dirac_v(const Potential& pot, double x, cplx lambda) {
  const cplx psi = pot.eval(x);
  Matrix2c v;
  v << cplx(0.0, -0.5) * lambda, std::conj(psi), psi, cplx(0.0, 0.5) * lambda;
  return v;
}

void check_cap(const Potential& pot, cplx lambda,
               const IntegratorOptions& opts) {
  if (std::abs(lambda.imag()) * pot.half_period() > opts.im_cap_scaled)
    throw IntegratorError("|Im lambda| * l exceeds the configured cap");
}

// Dormand-Prince 5(4) on a generic Eigen state. Derivative is supplied as
// deriv(t, y) -> dy/dt.
template <typename State, typename Deriv>
State integrate_dp5(Deriv&& deriv, double t0, double t1, State y,
                    const IntegratorOptions& opts) {
  const double span = t1 - t0;
  if (span == 0.0) return y;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const double hmin = std::abs(span) * opts.min_step_fraction;

  double t = t0;
  double h = dir * std::abs(span) / 64.0;

  State k1 = deriv(t, y);
  while ((t1 - t) * dir > 0.0) {
    if (std::abs(h) > std::abs(t1 - t)) h = t1 - t;
    const State k2 = deriv(t + h / 5.0, (y + h * (k1 / 5.0)).eval());
    const State k3 = deriv(t + 3.0 * h / 10.0,
                           (y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)).eval());
    const State k4 =
        deriv(t + 4.0 * h / 5.0,
              (y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3))
                  .eval());
    const State k5 =
        deriv(t + 8.0 * h / 9.0,
              (y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                        64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4))
                  .eval());
    const State k6 =
        deriv(t + h, (y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                               46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                               5103.0 / 18656.0 * k5))
                         .eval());
    const State y5 =
        y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                 2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
    const State k7 = deriv(t + h, y5);
    const State y4 =
        y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                 393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                 187.0 / 2100.0 * k6 + k7 / 40.0);

    // Mixed absolute/relative error, measured per unit step so the
    // accumulated error over the whole interval stays near opts.tol.
    const double budget = opts.tol * std::abs(h) / std::abs(span);
    double err = 0.0;
    for (Eigen::Index i = 0; i < y5.size(); ++i) {
      const double scale =
          budget * (1.0 + std::max(std::abs(y(i)), std::abs(y5(i))));
      err = std::max(err, std::abs(y5(i) - y4(i)) / scale);
    }

    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
    }
    double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.25);
    factor = std::clamp(factor, 0.2, 5.0);
    h *= factor;
    if (std::abs(h) < hmin && (t1 - t) * dir > 0.0)
      throw IntegratorError("step size underflow in transition integration");
  }
  return y;
}

}  // namespace

TransitionMatrix transition_matrix(const Potential& pot, double x, double y,
                                   cplx lambda, const IntegratorOptions& opts) {
  check_cap(pot, lambda, opts);
  auto deriv = [&](double t, const Matrix2c& m) -> Matrix2c {
    return dirac_v(pot, t, lambda) * m;
  };
  Matrix2c m = integrate_dp5(deriv, y, x, Matrix2c(Matrix2c::Identity()), opts);
  return TransitionMatrix{m, x, y, lambda};
}

std::pair<TransitionMatrix, Matrix2c> transition_with_lambda_derivative(
    const Potential& pot, double x, double y, cplx lambda,
    const IntegratorOptions& opts) {
  check_cap(pot, lambda, opts);
  using State = Eigen::Matrix<cplx, 2, 4>;  // [ M | dM/dlambda ]
  Matrix2c vl;
  vl << cplx(0.0, -0.5), 0.0, 0.0, cplx(0.0, 0.5);
  auto deriv = [&](double t, const State& s) -> State {
    const Matrix2c v = dirac_v(pot, t, lambda);
    State ds;
    ds.template leftCols<2>() = v * s.template leftCols<2>();
    ds.template rightCols<2>() =
        v * s.template rightCols<2>() + vl * s.template leftCols<2>();
    return ds;
  };
  State s0 = State::Zero();
  s0.template leftCols<2>() = Matrix2c::Identity();
  const State s = integrate_dp5(deriv, y, x, s0, opts);
  return {TransitionMatrix{s.template leftCols<2>(), x, y, lambda},
          Matrix2c(s.template rightCols<2>())};
}

TransitionMatrix monodromy(const Potential& pot, double x, cplx lambda,
                           const IntegratorOptions& opts) {
  return transition_matrix(pot, x + 2.0 * pot.half_period(), x, lambda, opts);
}

std::pair<TransitionMatrix, Matrix2c> monodromy_with_lambda_derivative(
    const Potential& pot, double x, cplx lambda,
    const IntegratorOptions& opts) {
  return transition_with_lambda_derivative(
      pot, x + 2.0 * pot.half_period(), x, lambda, opts);
}

TransitionGrid transition_grid(const Potential& pot, double x, double y,
                               cplx lambda, std::size_t intervals,
                               const IntegratorOptions& opts) {
  check_cap(pot, lambda, opts);
  TransitionGrid grid;
  grid.y = y;
  grid.x = x;
  grid.lambda = lambda;
  grid.m.reserve(intervals + 1);
  auto deriv = [&](double t, const Matrix2c& m) -> Matrix2c {
    return dirac_v(pot, t, lambda) * m;
  };
  Matrix2c m = Matrix2c::Identity();
  grid.m.push_back(m);
  const double h = (x - y) / static_cast<double>(intervals);
  for (std::size_t j = 0; j < intervals; ++j) {
    const double a = y + h * static_cast<double>(j);
    const double b = (j + 1 == intervals) ? x : a + h;
    m = integrate_dp5(deriv, a, b, m, opts);
    grid.m.push_back(m);
  }
  return grid;
}

GradientField MatrixGradientField::entry(int i, int j) const {
  GradientField f;
  f.y = y;
  f.x = x;
  f.g_psi.resize(d_psi.size());
  f.g_psibar.resize(d_psi.size());
  for (std::size_t s = 0; s < d_psi.size(); ++s) {
    f.g_psi[s] = d_psi[s](i, j);
    f.g_psibar[s] = d_psibar[s](i, j);
  }
  return f;
}

MatrixGradientField gradient_transition(const Potential& pot, double x,
                                        double y, cplx lambda,
                                        std::size_t grid_size,
                                        const IntegratorOptions& opts) {
  if (grid_size < 2) throw ConfigError("gradient grid too coarse");
  MatrixGradientField out;
  out.y = y;
  out.x = x;
  out.lambda = lambda;
  const std::size_t n = grid_size;
  out.d_psi.resize(n + 1);
  out.d_psibar.resize(n + 1);
  if (x == y) {
    std::fill(out.d_psi.begin(), out.d_psi.end(), Matrix2c::Zero());
    std::fill(out.d_psibar.begin(), out.d_psibar.end(), Matrix2c::Zero());
    return out;
  }
  const TransitionGrid grid = transition_grid(pot, x, y, lambda, n, opts);
  const Matrix2c full = grid.m.back();  // M(x, y, lambda)
  Matrix2c e21 = Matrix2c::Zero();
  e21(1, 0) = 1.0;
  Matrix2c e12 = Matrix2c::Zero();
  e12(0, 1) = 1.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const Matrix2c& mzy = grid.m[j];  // M(z_j, y)
    Matrix2c inv;                     // M(z_j, y)^{-1}, adjugate with det = 1
    inv << mzy(1, 1), -mzy(0, 1), -mzy(1, 0), mzy(0, 0);
    const Matrix2c mxz = full * inv;  // M(x, z_j)
    out.d_psi[j] = mxz * e21 * mzy;
    out.d_psibar[j] = mxz * e12 * mzy;
  }
  return out;
}

}  // namespace nlsb
