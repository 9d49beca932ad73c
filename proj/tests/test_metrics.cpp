#include <doctest.h>

#include <cmath>
#include <random>

#include "condevo/error.hpp"
#include "condevo/metrics.hpp"
#include "support.hpp"

using namespace condevo;
using testing::strong_preset;

namespace {

constexpr AtomicLabel G = AtomicLabel::g;
constexpr AtomicLabel E = AtomicLabel::e;

FieldDensityMatrix diag_state(std::initializer_list<double> w) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(w.size()));
  Eigen::Index i = 0;
  for (double x : w) m(i, i) = x, ++i;
  return FieldDensityMatrix(m);
}

}  // namespace

TEST_CASE("detection probability") {
  const Dimension d(3);
  std::mt19937 rng(47);
  const FieldDensityMatrix rho = testing::random_density(3, rng);
  CHECK(detection_probability(Superoperator::identity(d), rho) == doctest::Approx(1.0).epsilon(1e-14));

  ModelParams p = strong_preset(2);
  p.gamma_ge = p.gamma_eg = 0.0;
  const double t = 1.0 / derived_constants(p).alpha;
  const double pe = detection_probability(weak_zero_order(p, G, t).m_e, fock_state(p.d, 1));
  CHECK(pe == doctest::Approx(0.5 * (1.0 - std::exp(-2.0))).epsilon(1e-12));
  CHECK(pe == doctest::Approx(0.4323324).epsilon(1e-7));
  CHECK(detection_probability(exact_conditional(p, G, 0.0).m_e, fock_state(p.d, 1)) == 0.0);

  CHECK_THROWS_AS(detection_probability(Superoperator::identity(Dimension(2)), rho), Error);
  try {
    detection_probability(2.0 * Superoperator::identity(d), rho);
    FAIL("probability above one accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonphysicalProbability);
  }
  // Slack inside 1e-6 is clamped.
  CHECK(detection_probability((1.0 + 5e-7) * Superoperator::identity(d), rho) == 1.0);
}

TEST_CASE("conditional state") {
  std::mt19937 rng(53);
  const FieldDensityMatrix rho = testing::random_density(4, rng);
  CHECK(max_abs(conditional_state(Superoperator::identity(Dimension(4)), rho).matrix() - rho.matrix()) < 1e-14);

  const Dimension d2(2);
  const FieldDensityMatrix after = conditional_state(elementary(Elementary::KMinus, d2), fock_state(d2, 1));
  CHECK(max_abs(after.matrix() - fock_state(d2, 0).matrix()) < 1e-15);

  try {
    conditional_state(elementary(Elementary::KMinus, d2), fock_state(d2, 0));
    FAIL("empty branch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroProbabilityBranch);
  }

  // Positive trace but indefinite image: E_{0,0} - E_{1,1} / 2.
  const Superoperator flip = Superoperator::identity(d2) - 0.5 * elementary(Elementary::KPlus, d2);
  try {
    conditional_state(flip, fock_state(d2, 0));
    FAIL("indefinite state accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonphysicalState);
  }
}

TEST_CASE("detection at small times lowers the photon number") {
  const ModelParams p = strong_preset(4);
  const FieldDensityMatrix rho0 = mixed_state(p.d);
  const FieldDensityMatrix after = conditional_state(exact_conditional(p, G, 0.5).m_g, rho0);
  const CMatrix& m = after.matrix();
  CHECK(max_abs(m - CMatrix(m.diagonal().asDiagonal())) < 1e-14);
  for (int n = 1; n < 4; ++n) CHECK(m(n, n).real() < m(n - 1, n - 1).real());
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(fock_state(Dimension(5), 3)) == 0.0);
  CHECK(von_neumann_entropy(mixed_state(Dimension(4))) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(std::abs(von_neumann_entropy(mixed_state(Dimension(4))) - 1.3862944) < 1e-7);
  CHECK(von_neumann_entropy(diag_state({0.5, 0.5, 0.0, 0.0})) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  std::mt19937 rng(59);
  for (int d = 1; d <= 8; ++d) {
    const double s = von_neumann_entropy(testing::random_density(d, rng));
    CHECK(s >= -1e-14);
    CHECK(s <= std::log(double(d)) + 1e-12);
  }
}

TEST_CASE("information gain") {
  std::mt19937 rng(61);
  const FieldDensityMatrix rho = testing::random_density(4, rng);
  CHECK(std::abs(information_gain(rho, rho)) < 1e-14);
  CHECK(information_gain(mixed_state(Dimension(4)), fock_state(Dimension(4), 0)) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(information_gain(fock_state(Dimension(4), 3), diag_state({0.0, 0.0, 0.5, 0.5})) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("Uhlmann fidelity") {
  std::mt19937 rng(67);
  const FieldDensityMatrix rho = testing::random_density(4, rng);
  const FieldDensityMatrix sigma = testing::random_density(4, rng);
  CHECK(uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(uhlmann_fidelity(fock_state(Dimension(2), 0), fock_state(Dimension(2), 1)) == 0.0);
  CHECK(uhlmann_fidelity(mixed_state(Dimension(4)), fock_state(Dimension(4), 3)) == doctest::Approx(0.5).epsilon(1e-14));

  const double f = uhlmann_fidelity(rho, sigma);
  CHECK(std::abs(f - uhlmann_fidelity(sigma, rho)) <= 1e-9);
  CHECK(f >= 0.0);
  CHECK(f < 1.0);
  CHECK_THROWS_AS(uhlmann_fidelity(rho, mixed_state(Dimension(3))), Error);

  // Pure second argument: F = sqrt(<psi|rho|psi>).
  CHECK(uhlmann_fidelity(rho, fock_state(Dimension(4), 2)) == doctest::Approx(std::sqrt(rho.matrix()(2, 2).real())));
}

TEST_CASE("measurement records") {
  const ModelParams p = strong_preset(4);
  const FieldDensityMatrix rho0 = mixed_state(p.d);
  const SolverOptions exact;

  const MeasurementRecord start = measure(p, G, G, rho0, 0.0, exact);
  CHECK(start.probability == 1.0);
  CHECK(start.info_gain == 0.0);
  CHECK(start.fidelity == 1.0);

  for (double t : {0.3, 4.0, 30.0}) {
    for (AtomicLabel prep : {G, E}) {
      const double pg = measure(p, prep, G, rho0, t, exact).probability;
      const double pe = measure(p, prep, E, rho0, t, exact).probability;
      CHECK(std::abs(pg + pe - 1.0) <= 1e-9);
    }
  }

  const ConditionalPropagators props = solve(p, G, 2.0, SolverOptions{Method::weak, 0, 64});
  CHECK(props.method == Method::weak);
  CHECK(props.order == 0);
  const MeasurementRecord rec = measure(props, E, rho0);
  CHECK(rec.detected == E);
  CHECK(rec.t == 2.0);
}

TEST_CASE("qualitative curves at the strong preset") {
  const ModelParams p = strong_preset(4);
  const FieldDensityMatrix rho0 = mixed_state(p.d);
  const ExactSolver solver(p);
  double prev_gain = -1.0, prev_fid = 2.0;
  for (int i = 0; i <= 500; ++i) {
    const double t = 50.0 * i / 500 / 0.7;
    const MeasurementRecord r = measure(solver.conditional(G, t), G, rho0);
    CHECK(r.info_gain >= prev_gain - 1e-12);
    CHECK(r.fidelity <= prev_fid + 1e-12);
    prev_gain = r.info_gain;
    prev_fid = r.fidelity;
  }
}
