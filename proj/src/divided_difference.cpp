#include "condevo/divided_difference.hpp"

#include <array>
#include <cmath>

namespace condevo {

namespace {

// Below this separation the closed forms lose more than ~3 digits.
constexpr double kClusterRadius = 1e-3;

}  // namespace

cplx exp_divided_difference(cplx a, cplx b) {
  const cplx w = a - b;
  if (std::abs(w) < kClusterRadius) {
    // (e^w - 1)/w = sum w^k/(k+1)!
    const cplx series = 1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0 * (1.0 + w / 5.0 * (1.0 + w / 6.0))));
    return std::exp(b) * series;
  }
  return (std::exp(a) - std::exp(b)) / w;
}

cplx exp_divided_difference(cplx a, cplx b, cplx c) {
  const std::array<cplx, 3> z{a, b, c};
  // Divide by the widest pair so the remaining point sits between them.
  int wi = 0, wj = 1;
  double widest = std::abs(z[0] - z[1]);
  if (std::abs(z[0] - z[2]) > widest) { wi = 0; wj = 2; widest = std::abs(z[0] - z[2]); }
  if (std::abs(z[1] - z[2]) > widest) { wi = 1; wj = 2; widest = std::abs(z[1] - z[2]); }

  if (widest >= kClusterRadius) {
    const int wk = 3 - wi - wj;
    return (exp_divided_difference(z[wi], z[wk]) - exp_divided_difference(z[wj], z[wk])) / (z[wi] - z[wj]);
  }

  // e^centre * sum_n h_n(w) / (n+2)!, h_n the complete homogeneous
  // symmetric polynomial; h_1 = 0 about the centroid.
  const cplx centre = (a + b + c) / 3.0;
  const cplx w0 = a - centre, w1 = b - centre, w2 = c - centre;
  constexpr int kTerms = 5;
  std::array<std::array<cplx, kTerms + 1>, 3> powers{};
  for (int v = 0; v < 3; ++v) {
    const cplx w = v == 0 ? w0 : (v == 1 ? w1 : w2);
    powers[v][0] = 1.0;
    for (int k = 1; k <= kTerms; ++k) powers[v][k] = powers[v][k - 1] * w;
  }
  cplx sum = 0.5;
  double factorial = 2.0;
  for (int n = 1; n <= kTerms; ++n) {
    factorial *= (n + 2);
    cplx h = 0.0;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) h += powers[0][i] * powers[1][j] * powers[2][n - i - j];
    }
    sum += h / factorial;
  }
  return std::exp(centre) * sum;
}

}  // namespace condevo
