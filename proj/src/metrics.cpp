#include "condevo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "condevo/error.hpp"

namespace condevo {

namespace {

void require_same_dim(const Superoperator& m, const FieldDensityMatrix& rho) {
  if (m.dim() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "superoperator and state dimensions differ");
}

cplx trace_of_image(const Superoperator& m, const CMatrix& rho) {
  const Dimension d = m.dim();
  const CVector image = m.dense() * flatten(rho);
  cplx tr = 0.0;
  for (int n = 0; n < d.value(); ++n) tr += image(unit_index(n, n, d));
  return tr;
}

CMatrix hermitian_part(const CMatrix& x) { return 0.5 * (x + x.adjoint()); }

}  // namespace

double detection_probability(const Superoperator& m, const FieldDensityMatrix& rho) {
  require_same_dim(m, rho);
  const cplx tr = trace_of_image(m, rho.matrix());
  if (std::abs(tr.imag()) > kProbabilityImagTol) {
    std::ostringstream msg;
    msg << "detection probability has imaginary part " << tr.imag();
    throw Error(ErrorCode::NonphysicalProbability, msg.str());
  }
  if (tr.real() < -kProbabilitySlack || tr.real() > 1.0 + kProbabilitySlack) {
    std::ostringstream msg;
    msg << "detection probability " << tr.real() << " outside [0, 1]";
    throw Error(ErrorCode::NonphysicalProbability, msg.str());
  }
  return std::clamp(tr.real(), 0.0, 1.0);
}

FieldDensityMatrix conditional_state(const Superoperator& m, const FieldDensityMatrix& rho) {
  require_same_dim(m, rho);
  const CMatrix image = m.apply(rho.matrix());
  const double tr = image.trace().real();
  if (!(tr > kMinBranchProbability)) {
    std::ostringstream msg;
    msg << "detection branch has probability " << tr;
    throw Error(ErrorCode::ZeroProbabilityBranch, msg.str());
  }
  const Eigensystem es = hermitian_eigensystem(hermitian_part(image / tr));
  if (es.values.minCoeff() < -kNegativeEigenvalueTol) {
    std::ostringstream msg;
    msg << "conditional state has eigenvalue " << es.values.minCoeff();
    throw Error(ErrorCode::NonphysicalState, msg.str());
  }
  const RVector clamped = es.values.cwiseMax(0.0);
  const CMatrix rebuilt = es.vectors * clamped.cast<cplx>().asDiagonal() * es.vectors.adjoint();
  return FieldDensityMatrix(hermitian_part(rebuilt / clamped.sum()));
}

double von_neumann_entropy(const FieldDensityMatrix& rho) {
  const Eigensystem es = hermitian_eigensystem(rho.matrix());
  double s = 0.0;
  for (double lambda : es.values) {
    if (lambda > kEntropyEigenvalueFloor) s -= lambda * std::log(lambda);
  }
  return s;
}

double information_gain(const FieldDensityMatrix& before, const FieldDensityMatrix& after) {
  return von_neumann_entropy(before) - von_neumann_entropy(after);
}

double uhlmann_fidelity(const FieldDensityMatrix& rho, const FieldDensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "fidelity of states with different d");
  const Eigensystem es = hermitian_eigensystem(rho.matrix());
  const RVector roots = es.values.cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_rho = es.vectors * roots.cast<cplx>().asDiagonal() * es.vectors.adjoint();
  const CMatrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  const RVector mu = hermitian_eigensystem(hermitian_part(inner)).values;
  double f = 0.0;
  for (double v : mu) f += std::sqrt(std::max(v, 0.0));
  if (f > 1.0 + kFidelitySlack) {
    std::ostringstream msg;
    msg << "fidelity " << f << " exceeds 1";
    throw Error(ErrorCode::NonphysicalState, msg.str());
  }
  return std::clamp(f, 0.0, 1.0);
}

ConditionalPropagators solve(const ModelParams& p, AtomicLabel prepared, double t, const SolverOptions& options) {
  switch (options.method) {
    case Method::exact:
      return exact_conditional(p, prepared, t);
    case Method::strong:
      return strong_perturbative(p, prepared, t, options.order, options.quad_steps);
    case Method::weak:
      return options.order == 0 ? weak_zero_order(p, prepared, t)
                                : weak_first_order(p, prepared, t, options.quad_steps);
  }
  throw Error(ErrorCode::ValidationError, "unknown method");
}

MeasurementRecord measure(const ConditionalPropagators& props, AtomicLabel detected, const FieldDensityMatrix& rho0) {
  const Superoperator& m = props.detected(detected);
  const double probability = detection_probability(m, rho0);
  FieldDensityMatrix after = conditional_state(m, rho0);
  return MeasurementRecord{props.prepared,
                           detected,
                           props.t,
                           probability,
                           information_gain(rho0, after),
                           uhlmann_fidelity(rho0, after),
                           std::move(after)};
}

MeasurementRecord measure(const ModelParams& p, AtomicLabel prepared, AtomicLabel detected,
                          const FieldDensityMatrix& rho0, double t, const SolverOptions& options) {
  return measure(solve(p, prepared, t, options), detected, rho0);
}

}  // namespace condevo
