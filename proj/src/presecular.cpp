#include <cmath>
#include <limits>
#include <sstream>

#include "condevo/error.hpp"
#include "condevo/solvers.hpp"

namespace condevo {

namespace {

AtomFieldState axpy(const AtomFieldState& s, double h, const AtomFieldState& k) {
  return {s.gg + h * k.gg, s.ge + h * k.ge, s.eg + h * k.eg, s.ee + h * k.ee};
}

void check_initial_state(const AtomFieldState& s) {
  constexpr double tol = 1e-10;
  if (max_abs(s.eg - s.ge.adjoint()) > tol) {
    throw Error(ErrorCode::InvalidState, "atom-field state: rho_eg != rho_ge^dagger");
  }
  for (const CMatrix* diag : {&s.gg, &s.ee}) {
    if (max_abs(*diag - diag->adjoint()) > tol) {
      throw Error(ErrorCode::InvalidState, "atom-field state: diagonal block not Hermitian");
    }
    if (hermitian_eigensystem(*diag).values.minCoeff() < -tol) {
      throw Error(ErrorCode::InvalidState, "atom-field state: diagonal block not positive");
    }
  }
  if (std::abs(s.total_trace() - 1.0) > tol) throw Error(ErrorCode::InvalidState, "atom-field state: trace != 1");
}

}  // namespace

std::vector<AtomFieldState> integrate_presecular(const ModelParams& p, const AtomFieldState& s0,
                                                 std::span<const double> grid, double max_step) {
  validate(p);
  if (grid.empty() || grid.front() != 0.0) throw Error(ErrorCode::ValidationError, "time grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::ValidationError, "time grid must be ascending");
  }
  check_initial_state(s0);

  double h_max = std::numeric_limits<double>::infinity();
  if (p.gamma_phase > 0.0) h_max = std::min(h_max, 0.01 / p.gamma_phase);
  if (std::abs(p.omega) > 0.0) h_max = std::min(h_max, 0.01 / std::abs(p.omega));
  if (max_step > 0.0) h_max = std::min(h_max, max_step);
  if (!std::isfinite(h_max)) h_max = 0.01;

  const double trace0 = s0.total_trace();
  std::vector<AtomFieldState> out;
  out.reserve(grid.size());
  out.push_back(s0);
  AtomFieldState s = s0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double span = grid[i] - grid[i - 1];
    const auto steps = static_cast<long>(std::ceil(span / h_max));
    const double h = span / static_cast<double>(steps);
    for (long k = 0; k < steps; ++k) {
      const AtomFieldState k1 = presecular_rhs(p, s);
      const AtomFieldState k2 = presecular_rhs(p, axpy(s, 0.5 * h, k1));
      const AtomFieldState k3 = presecular_rhs(p, axpy(s, 0.5 * h, k2));
      const AtomFieldState k4 = presecular_rhs(p, axpy(s, h, k3));
      s.gg += h / 6.0 * (k1.gg + 2.0 * k2.gg + 2.0 * k3.gg + k4.gg);
      s.ge += h / 6.0 * (k1.ge + 2.0 * k2.ge + 2.0 * k3.ge + k4.ge);
      s.eg += h / 6.0 * (k1.eg + 2.0 * k2.eg + 2.0 * k3.eg + k4.eg);
      s.ee += h / 6.0 * (k1.ee + 2.0 * k2.ee + 2.0 * k3.ee + k4.ee);
    }
    const double drift = std::abs(s.total_trace() - trace0);
    if (drift > kTraceDriftBudget) {
      std::ostringstream msg;
      msg << "trace drift " << drift << " at t = " << grid[i] << " exceeds budget";
      throw Error(ErrorCode::StepTooLarge, msg.str());
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace condevo
