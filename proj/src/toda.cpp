#include "nlsb/toda.hpp"

#include <cmath>

namespace nlsb {

namespace {

void check_state(const TodaState& s) {
  if (s.q.size() < 2 || s.q.size() != s.p.size())
    throw ConfigError("Toda state needs N >= 2 with matching q and p");
}

}  // namespace

Eigen::MatrixXd jacobi_matrix(const TodaState& state) {
  check_state(state);
  const Eigen::Index n = static_cast<Eigen::Index>(state.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) l(k, k) = -state.p[k];
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double c = std::exp(0.5 * (state.q[k] - state.q[k + 1]));
    if (!std::isfinite(c))
      throw Error("Jacobi off-diagonal overflow for extreme q difference");
    l(k, k + 1) = c;
    l(k + 1, k) = c;
  }
  return l;
}

TodaSpectralData toda_spectral_data(const TodaState& state) {
  const Eigen::MatrixXd l = jacobi_matrix(state);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l);
  if (es.info() != Eigen::Success)
    throw Error("Jacobi eigen-decomposition failed");
  TodaSpectralData data;
  const Eigen::Index n = l.rows();
  data.eigenvalues.resize(n);
  data.residues.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    data.eigenvalues[k] = es.eigenvalues()(k);
    const double first = es.eigenvectors()(0, k);
    data.residues[k] = first * first;
  }
  return data;
}

cplx toda_weyl(const TodaSpectralData& data, cplx lambda) {
  cplx x = 0.0;
  for (std::size_t k = 0; k < data.eigenvalues.size(); ++k) {
    const cplx den = data.eigenvalues[k] - lambda;
    if (std::abs(den) <= 1e-12 * (1.0 + std::abs(lambda)))
      throw PoleError("Weyl function evaluated at an eigenvalue");
    x += data.residues[k] / den;
  }
  return x;
}

cplx toda_weyl_resolvent(const TodaState& state, cplx lambda) {
  const Eigen::MatrixXd l = jacobi_matrix(state);
  const Eigen::Index n = l.rows();
  Eigen::MatrixXcd a = l.cast<cplx>();
  a.diagonal().array() -= lambda;
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(n);
  e1(0) = 1.0;
  const Eigen::VectorXcd x = a.partialPivLu().solve(e1);
  return x(0);  // (L - lambda)^{-1}(1,1) = sum rho_k/(l_k - lambda)
}

namespace {

cplx directional_derivative(const TodaState& state, const TodaObservable& f,
                            bool momentum, std::size_t k, double h) {
  auto shifted = [&](double d) {
    TodaState s = state;
    (momentum ? s.p : s.q)[k] += d;
    return f(s);
  };
  const cplx d1 = (shifted(h) - shifted(-h)) / (2.0 * h);
  const cplx d2 = (shifted(0.5 * h) - shifted(-0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;  // Richardson: O(h^4)
}

}  // namespace

cplx toda_bracket(const TodaState& state, const TodaObservable& f,
                  const TodaObservable& g, double fd_step) {
  check_state(state);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < state.size(); ++k) {
    const double hq = fd_step * (1.0 + std::abs(state.q[k]));
    const double hp = fd_step * (1.0 + std::abs(state.p[k]));
    const cplx fq = directional_derivative(state, f, false, k, hq);
    const cplx fp = directional_derivative(state, f, true, k, hp);
    const cplx gq = directional_derivative(state, g, false, k, hq);
    const cplx gp = directional_derivative(state, g, true, k, hp);
    sum += fq * gp - fp * gq;
  }
  return sum;
}

TodaMahCheck verify_mah(const TodaState& state, cplx lambda, cplx mu,
                        double fd_step) {
  if (lambda == mu) throw ConfigError("bracket check needs lambda != mu");
  const auto observable = [](cplx at) {
    return [at](const TodaState& s) {
      return toda_weyl(toda_spectral_data(s), at);
    };
  };
  const cplx lhs =
      toda_bracket(state, observable(lambda), observable(mu), fd_step);
  const TodaSpectralData data = toda_spectral_data(state);
  const cplx xl = toda_weyl(data, lambda);
  const cplx xm = toda_weyl(data, mu);
  const cplx rhs = (xl - xm) * ((xl - xm) / (lambda - mu) - xl * xm);
  return TodaMahCheck{lhs, rhs,
                      std::abs(lhs - rhs) / (1.0 + std::abs(rhs))};
}

TodaState toda_flow_step(const TodaState& state, double dt, int steps) {
  check_state(state);
  const std::size_t n = state.size();
  auto force = [n](const std::vector<double>& q, std::vector<double>& dp) {
    for (std::size_t k = 0; k < n; ++k) {
      double fk = 0.0;
      if (k + 1 < n) fk -= std::exp(q[k] - q[k + 1]);
      if (k > 0) fk += std::exp(q[k - 1] - q[k]);
      if (!std::isfinite(fk)) throw Error("Toda force overflow");
      dp[k] = fk;
    }
  };

  TodaState s = state;
  std::vector<double> k1q(n), k1p(n), k2q(n), k2p(n), k3q(n), k3p(n), k4q(n),
      k4p(n), tq(n);
  for (int step = 0; step < steps; ++step) {
    k1q = s.p;
    force(s.q, k1p);
    for (std::size_t j = 0; j < n; ++j) {
      tq[j] = s.q[j] + 0.5 * dt * k1q[j];
      k2q[j] = s.p[j] + 0.5 * dt * k1p[j];
    }
    force(tq, k2p);
    for (std::size_t j = 0; j < n; ++j) {
      tq[j] = s.q[j] + 0.5 * dt * k2q[j];
      k3q[j] = s.p[j] + 0.5 * dt * k2p[j];
    }
    force(tq, k3p);
    for (std::size_t j = 0; j < n; ++j) {
      tq[j] = s.q[j] + dt * k3q[j];
      k4q[j] = s.p[j] + dt * k3p[j];
    }
    force(tq, k4p);
    for (std::size_t j = 0; j < n; ++j) {
      s.q[j] += dt / 6.0 * (k1q[j] + 2.0 * k2q[j] + 2.0 * k3q[j] + k4q[j]);
      s.p[j] += dt / 6.0 * (k1p[j] + 2.0 * k2p[j] + 2.0 * k3p[j] + k4p[j]);
    }
  }
  return s;
}

}  // namespace nlsb
