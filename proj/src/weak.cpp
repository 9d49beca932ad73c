#include <cmath>

#include "condevo/divided_difference.hpp"
#include "condevo/error.hpp"
#include "condevo/solvers.hpp"

namespace condevo {

namespace {

struct SectorSlot {
  int sector;
  Eigen::Index local;
};

SectorSlot locate(int m, int n, Dimension d) {
  const int k = m - n;
  return {k + d.value() - 1, k >= 0 ? n : m};
}

ModelParams without_relaxation(ModelParams p) {
  p.gamma_ge = 0.0;
  p.gamma_eg = 0.0;
  return p;
}

}  // namespace

CharacteristicRootData characteristic_roots(const ModelParams& p) {
  const DerivedConstants c = derived_constants(p);
  const Dimension d = p.d;
  const double a2 = c.alpha * c.alpha;
  const Superoperator k0 = elementary(Elementary::K0, d);
  const Superoperator kpkm = elementary(Elementary::KPlus, d) * elementary(Elementary::KMinus, d);
  const Superoperator shifted = c.beta * 2.0 + c.alpha;  // alpha + 2 beta

  // D = 4 alpha^2 K+K- + 8 alpha^2 K0 + (alpha + 2 beta)^2
  const Superoperator disc = 4.0 * a2 * kpkm + 8.0 * a2 * k0 + shifted * shifted;
  const Superoperator root = scalar_function_of_diagonal(disc, [](cplx z) { return std::sqrt(z); });
  const Superoperator trace = -c.alpha * (2.0 * k0 + 1.0);  // -alpha (2 K0 + 1)

  CharacteristicRootData out;
  out.discriminant = diagonal_values(disc);
  out.mu1 = diagonal_values(0.5 * (root + trace));
  out.mu2 = diagonal_values(0.5 * (trace - root));
  return out;
}

WeakSolver::WeakSolver(const ModelParams& p)
    : params_(p), roots_(characteristic_roots(p)), relaxation_(p.d) {
  const BlockGenerator a0 = conditional_block_generator(without_relaxation(p));
  ground_rate_ = diagonal_values(a0.gg);
  excited_rate_ = diagonal_values(a0.ee);

  // Relaxation coupling [[-gamma_ge, gamma_eg], [gamma_ge, -gamma_eg]] per sector.
  for (int k = 0; k < relaxation_.sector_count(); ++k) {
    const auto n = static_cast<Eigen::Index>(relaxation_.units(k).size());
    const CMatrix id = CMatrix::Identity(n, n);
    relaxation_.sector(k) << -p.gamma_ge * id, p.gamma_eg * id, p.gamma_ge * id, -p.gamma_eg * id;
  }
}

BlockPropagator WeakSolver::zero_order(double t) const {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "weak perturbation: negative time");
  const Dimension d = params_.d;
  const int dv = d.value();
  const double alpha = derived_constants(params_).alpha;
  BlockPropagator out(d);

  // Excited units on the top Fock level have no ground partner (K+ E = 0).
  for (int j = 0; j < dv; ++j) {
    for (int l = 0; l < dv; ++l) {
      if (j < dv - 1 && l < dv - 1) continue;
      const auto [sector, local] = locate(j, l, d);
      const auto n = static_cast<Eigen::Index>(out.units(sector).size());
      out.sector(sector)(n + local, n + local) = std::exp(excited_rate_(unit_index(j, l, d)) * t);
    }
  }

  for (int m = 0; m < dv; ++m) {
    for (int n_col = 0; n_col < dv; ++n_col) {
      const int ground = unit_index(m, n_col, d);
      const auto [sector, local] = locate(m, n_col, d);
      CMatrix& blk = out.sector(sector);
      const auto n = static_cast<Eigen::Index>(out.units(sector).size());
      const cplx zg = ground_rate_(ground) * t;

      if (m == 0 || n_col == 0) {
        blk(local, local) = std::exp(zg);
        continue;
      }

      // Closed two-level system {ground E_{m,n}, excited E_{m-1,n-1}} with
      // symmetric coupling alpha sqrt(m n); roots live on the excited unit.
      const int excited = unit_index(m - 1, n_col - 1, d);
      const Eigen::Index ex = n + local - 1;
      const cplx c = alpha * std::sqrt(static_cast<double>(m) * n_col);
      const cplx z1 = roots_.mu1(excited) * t;
      const cplx z2 = roots_.mu2(excited) * t;
      const cplx ze = excited_rate_(excited) * t;

      // alpha (e^{mu1 t} - e^{mu2 t}) / sqrt(D) K-, and its mirror for the
      // excited preparation.
      const cplx off = c * t * exp_divided_difference(z1, z2);
      // Integrating factor: e^{a t} + c^2 int_0^t e^{a (t-s)} f(s) ds.
      const cplx c2t2 = c * c * t * t;
      blk(local, local) = std::exp(zg) + c2t2 * exp_divided_difference(z1, z2, zg);
      blk(ex, ex) = std::exp(ze) + c2t2 * exp_divided_difference(z1, z2, ze);
      blk(ex, local) = off;
      blk(local, ex) = off;
    }
  }
  return out;
}

BlockPropagator WeakSolver::first_order(double t, AtomicLabel prepared, int quad_steps) const {
  BlockPropagator zero = zero_order(t);
  if (params_.gamma_ge == 0.0 && params_.gamma_eg == 0.0) return zero;
  BlockPropagator correction = variation_of_parameters([this](double s) { return zero_order(s); }, relaxation_,
                                                       zero, t, prepared, quad_steps);
  return zero + correction;
}

namespace {

// Zeroes every sector column outside the prepared half.
BlockPropagator keep_prepared(BlockPropagator a, AtomicLabel prepared) {
  for (int k = 0; k < a.sector_count(); ++k) {
    const int n = static_cast<int>(a.units(k).size());
    a.sector(k).middleCols(prepared == AtomicLabel::g ? n : 0, n).setZero();
  }
  return a;
}

}  // namespace

WeakFirstOrderStepper::WeakFirstOrderStepper(const WeakSolver& solver, double h, AtomicLabel prepared,
                                             int quad_steps)
    : solver_(solver), h_(h), prepared_(prepared), quad_steps_(quad_steps), correction_(solver.dim()) {
  if (!(h > 0.0)) throw Error(ErrorCode::NegativeTime, "weak stepper: step must be positive");
}

BlockPropagator WeakFirstOrderStepper::at(int i) {
  if (i < index_) throw Error(ErrorCode::IndexOutOfRange, "weak stepper: grid index moved backwards");
  if (i > 0 && !step_correction_) {
    step_zero_ = solver_.zero_order(h_);
    const BlockPropagator minus_zero = -1.0 * *step_zero_;
    step_correction_ = keep_prepared(solver_.first_order(h_, AtomicLabel::g, quad_steps_) + minus_zero, AtomicLabel::g) +
                       keep_prepared(solver_.first_order(h_, AtomicLabel::e, quad_steps_) + minus_zero, AtomicLabel::e);
  }
  for (; index_ < i; ++index_) {
    correction_ = keep_prepared(*step_zero_ * correction_ + *step_correction_ * solver_.zero_order(index_ * h_),
                                prepared_);
  }
  return solver_.zero_order(i * h_) + correction_;
}

ConditionalPropagators weak_zero_order(const ModelParams& p, AtomicLabel prepared, double t) {
  const WeakSolver solver(p);
  return column(solver.zero_order(t), prepared, t, Method::weak, 0, weak_regime_valid(p));
}

ConditionalPropagators weak_first_order(const ModelParams& p, AtomicLabel prepared, double t, int quad_steps) {
  const WeakSolver solver(p);
  return column(solver.first_order(t, prepared, quad_steps), prepared, t, Method::weak, 1, weak_regime_valid(p));
}

}  // namespace condevo
