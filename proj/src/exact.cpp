#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "condevo/error.hpp"
#include "condevo/solvers.hpp"

namespace condevo {

ExactSolver::ExactSolver(const ModelParams& p)
    : generator_(BlockPropagator::from_generator(conditional_block_generator(p))) {}

BlockPropagator ExactSolver::propagator(double t) const {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "exact solver: negative time");
  BlockPropagator out(generator_.dim());
  for (int k = 0; k < out.sector_count(); ++k) {
    const CMatrix scaled = t * generator_.sector(k);
    out.sector(k) = scaled.exp();
    if (!out.sector(k).allFinite()) {
      throw Error(ErrorCode::ExpmFailure, "matrix exponential overflowed at t = " + std::to_string(t));
    }
  }
  return out;
}

ConditionalPropagators ExactSolver::conditional(AtomicLabel prepared, double t) const {
  return column(propagator(t), prepared, t, Method::exact, 0, true);
}

ConditionalPropagators exact_conditional(const ModelParams& p, AtomicLabel prepared, double t) {
  return ExactSolver(p).conditional(prepared, t);
}

}  // namespace condevo
