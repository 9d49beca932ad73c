#include <cmath>

#include "condevo/error.hpp"
#include "condevo/solvers.hpp"

namespace condevo {

namespace {

// Unperturbed strong-relaxation propagator exp(A0 s) with
// A0 = [[0, gamma_eg], [0, -gamma_eg]]: only decay of the excited block.
BlockPropagator decay_propagator(Dimension d, double gamma_eg, double s) {
  BlockPropagator out(d);
  const double stay = std::exp(-gamma_eg * s);
  for (int k = 0; k < out.sector_count(); ++k) {
    const auto n = static_cast<Eigen::Index>(out.units(k).size());
    CMatrix& m = out.sector(k);
    m.topLeftCorner(n, n).setIdentity();
    m.topRightCorner(n, n) = (1.0 - stay) * CMatrix::Identity(n, n);
    m.bottomRightCorner(n, n) = stay * CMatrix::Identity(n, n);
  }
  return out;
}

}  // namespace

ConditionalPropagators strong_perturbative(const ModelParams& p, AtomicLabel prepared, double t, int order,
                                           int quad_steps) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "strong perturbation: negative time");
  if (order != 0 && order != 1) throw Error(ErrorCode::ValidationError, "perturbation order must be 0 or 1");
  validate(p);
  const bool valid = strong_regime_valid(p);
  const Dimension d = p.d;
  const double g = p.gamma_eg;

  if (order == 0) {
    return column(decay_propagator(d, g, t), prepared, t, Method::strong, 0, valid);
  }
  if (g == 0.0) throw Error(ErrorCode::ZeroGammaEg, "strong perturbation needs gamma_eg > 0");

  const BlockGenerator a = conditional_block_generator(p);
  if (prepared == AtomicLabel::g) {
    // Closed form: with w = (1 - e^{-gamma_eg t}) / gamma_eg,
    //   M_g = I - A_eg w + (A_gg + A_eg) t,   M_e = A_eg w.
    const double w = -std::expm1(-g * t) / g;
    return ConditionalPropagators{prepared,
                                  t,
                                  Superoperator::identity(d) - w * a.eg + t * (a.gg + a.eg),
                                  w * a.eg,
                                  Method::strong,
                                  1,
                                  valid};
  }

  BlockPropagator perturbation = BlockPropagator::from_generator(a);
  BlockPropagator unperturbed_generator(d);
  for (int k = 0; k < unperturbed_generator.sector_count(); ++k) {
    const auto n = static_cast<Eigen::Index>(unperturbed_generator.units(k).size());
    unperturbed_generator.sector(k).topRightCorner(n, n) = g * CMatrix::Identity(n, n);
    unperturbed_generator.sector(k).bottomRightCorner(n, n) = -g * CMatrix::Identity(n, n);
  }
  perturbation += cplx(-1.0) * unperturbed_generator;

  const BlockPropagator zero = decay_propagator(d, g, t);
  const BlockPropagator correction = variation_of_parameters(
      [&](double s) { return decay_propagator(d, g, s); }, perturbation, zero, t, prepared, quad_steps);
  return column(zero + correction, prepared, t, Method::strong, 1, valid);
}

}  // namespace condevo
