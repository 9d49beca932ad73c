#pragma once

#include <random>

#include <Eigen/Dense>

#include "condevo/generator.hpp"

namespace condevo::testing {

inline ModelParams strong_preset(int d) { return {cplx{0.7, 0.0}, 0.5, 2.0, 0.1, 1.0, Dimension(d)}; }
inline ModelParams weak_preset(int d) { return {cplx{0.7, 0.0}, 0.5, 2.0, 0.0, 0.01, Dimension(d)}; }

inline CMatrix random_hermitian(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx{u(rng), u(rng)};
  return 0.5 * (m + m.adjoint());
}

inline FieldDensityMatrix random_density(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = cplx{u(rng), u(rng)};
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return FieldDensityMatrix(0.5 * (rho + rho.adjoint()));
}

/// Classic RK4 on dV/dt = A V with a fixed step; independent of the
/// library's exponential.
inline CMatrix rk4_flow(const CMatrix& a, const CMatrix& v0, double t, int steps) {
  CMatrix v = v0;
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const CMatrix k1 = a * v;
    const CMatrix k2 = a * (v + 0.5 * h * k1);
    const CMatrix k3 = a * (v + 0.5 * h * k2);
    const CMatrix k4 = a * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

}  // namespace condevo::testing
