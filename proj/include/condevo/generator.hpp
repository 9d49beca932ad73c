#pragma once

#include <array>
#include <string_view>

#include "condevo/superop.hpp"

namespace condevo {

/// Atomic basis B_A = {g, e}; used both as preparation and detection label.
enum class AtomicLabel { g = 0, e = 1 };

std::string_view to_string(AtomicLabel label) noexcept;
AtomicLabel parse_atomic_label(std::string_view text);

/// Physical rates of the cavity + dissipative two-level-atom model.
struct ModelParams {
  cplx omega;          // atom-mode coupling
  double delta;        // detuning
  double gamma_phase;  // phase relaxation of atomic coherences
  double gamma_ge;     // upward population rate g -> e
  double gamma_eg;     // downward population rate e -> g
  Dimension d;
};

/// Throws InvalidParams for non-finite or negative rates and
/// DegenerateParams when gamma_phase = delta = 0.
void validate(const ModelParams& p);

struct DerivedConstants {
  double kappa;        // |omega|^2 / (gamma_phase^2 + delta^2)
  double alpha;        // kappa * gamma_phase
  Superoperator beta;  // kappa * (i delta N - gamma_phase / 2)
};

DerivedConstants derived_constants(const ModelParams& p);

/// Constant generator of the conditional-transformer system
///
///   d/dt (M_g, M_e)^T = A (M_g, M_e)^T,
///
/// indexed as A[detected-row][detected-col]:
///   A_gg = -(alpha K0 + beta + gamma_ge)    A_ge = alpha K+ + gamma_eg
///   A_eg =   alpha K- + gamma_ge            A_ee = -(alpha K0 - beta + gamma_eg)
///
/// The combinations alpha K0 -/+ alpha/2 that beta contributes are built as
/// alpha {a^dagger a, .}/2 and alpha {a a^dagger, .}/2, which makes both
/// column trace-sums vanish identically on the truncated space.
struct BlockGenerator {
  Superoperator gg, ge, eg, ee;

  const Superoperator& block(AtomicLabel row, AtomicLabel col) const;
  Dimension dim() const { return gg.dim(); }
  /// 2d^2 x 2d^2 matrix over the paired vector (vec rho_g, vec rho_e).
  CMatrix dense() const;
};

BlockGenerator conditional_block_generator(const ModelParams& p);

/// Secular Liouvillian L' = L0 + Lr acting on the paired vector
/// (vec rho_gg, vec rho_ee), assembled from atomic theta_jk superoperators
/// (theta_jk takes the kk block to the jj block).
struct PairLiouvillian {
  Dimension dim;
  CMatrix dense;

  std::array<CMatrix, 2> apply(const CMatrix& rho_gg, const CMatrix& rho_ee) const;
};

PairLiouvillian secular_liouvillian(const ModelParams& p);

/// Atom-field density operator split into atomic blocks, in the frame
/// rotating with the detuning.
struct AtomFieldState {
  CMatrix gg, ge, eg, ee;

  static AtomFieldState product(AtomicLabel atom, const FieldDensityMatrix& field);
  double total_trace() const;
};

/// Time derivative of the pre-secular four-block master equation.
AtomFieldState presecular_rhs(const ModelParams& p, const AtomFieldState& s);

}  // namespace condevo
