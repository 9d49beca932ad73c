#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "condevo/generator.hpp"

namespace condevo {

enum class Method { exact, strong, weak };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view text);

/// Conditional transformers M_{r,i}(t) for one preparation i and both
/// detection results r.
struct ConditionalPropagators {
  AtomicLabel prepared;
  double t;
  Superoperator m_g;
  Superoperator m_e;
  Method method;
  int order;  // 0 or 1 for perturbative methods; 0 for exact
  bool regime_valid;

  const Superoperator& detected(AtomicLabel r) const {
    return r == AtomicLabel::g ? m_g : m_e;
  }
};

/// 2x2 array of superoperators (detected x prepared) stored per offset
/// sector. Sector k holds a 2 n_k square matrix over
/// [ground units of offset k, excited units of offset k].
class BlockPropagator {
 public:
  explicit BlockPropagator(Dimension d);

  static BlockPropagator identity(Dimension d);
  static BlockPropagator from_generator(const BlockGenerator& a);

  Dimension dim() const noexcept { return dim_; }
  int sector_count() const noexcept { return static_cast<int>(sectors_.size()); }
  int offset(int sector) const noexcept { return sector - (dim_.value() - 1); }
  const std::vector<int>& units(int sector) const { return (*units_)[sector]; }
  CMatrix& sector(int i) { return sectors_[i]; }
  const CMatrix& sector(int i) const { return sectors_[i]; }

  Superoperator block(AtomicLabel detected, AtomicLabel prepared) const;
  /// 2d^2 x 2d^2 matrix over (vec rho_g, vec rho_e).
  CMatrix dense() const;

  BlockPropagator& operator+=(const BlockPropagator& other);
  BlockPropagator& operator*=(cplx s);
  friend BlockPropagator operator*(const BlockPropagator& a, const BlockPropagator& b);
  friend BlockPropagator operator+(BlockPropagator a, const BlockPropagator& b) { return a += b; }
  friend BlockPropagator operator*(cplx s, BlockPropagator a) { return a *= s; }

 private:
  Dimension dim_;
  std::shared_ptr<const std::vector<std::vector<int>>> units_;
  std::vector<CMatrix> sectors_;
};

/// {"method", "order", "t", "prepared", "regime_valid", "params", "M_g", "M_e"}
/// with both transformers in the superoperator JSON matrix format.
nlohmann::json to_json(const ConditionalPropagators& props, const ModelParams& p);

ConditionalPropagators column(const BlockPropagator& g, AtomicLabel prepared, double t,
                              Method method, int order, bool regime_valid);

/// Strong relaxation: gamma_ge < kappa Gamma < gamma_eg.
bool strong_regime_valid(const ModelParams& p);
/// Weak relaxation: gamma_ge <= gamma_eg < kappa Gamma.
bool weak_regime_valid(const ModelParams& p);

// ---------------------------------------------------------------------------
// Exact solver

/// Per-sector matrix exponential of the block generator.
class ExactSolver {
 public:
  explicit ExactSolver(const ModelParams& p);

  BlockPropagator propagator(double t) const;
  ConditionalPropagators conditional(AtomicLabel prepared, double t) const;

 private:
  BlockPropagator generator_;
};

ConditionalPropagators exact_conditional(const ModelParams& p, AtomicLabel prepared, double t);

// ---------------------------------------------------------------------------
// Strong relaxation perturbation

inline constexpr int kDefaultQuadSteps = 64;

ConditionalPropagators strong_perturbative(const ModelParams& p, AtomicLabel prepared, double t,
                                           int order, int quad_steps = kDefaultQuadSteps);

// ---------------------------------------------------------------------------
// Weak relaxation perturbation

/// Discriminant and characteristic roots of the second-order equation for
/// the off-diagonal transformer, evaluated per matrix unit (flat index) of
/// the excited block, i.e. on the unit the coefficient functions act on.
struct CharacteristicRootData {
  CVector discriminant;
  CVector mu1;  // (sqrt D - alpha (2 K0 + 1)) / 2
  CVector mu2;  // (-sqrt D - alpha (2 K0 + 1)) / 2
};

CharacteristicRootData characteristic_roots(const ModelParams& p);

class WeakSolver {
 public:
  explicit WeakSolver(const ModelParams& p);

  /// Zero-order propagator pair for both preparations. With
  /// gamma_ge = gamma_eg = 0 this is the exact propagator.
  BlockPropagator zero_order(double t) const;
  /// Zero order plus the variation-of-parameters correction for one
  /// preparation (only the prepared column is meaningful).
  BlockPropagator first_order(double t, AtomicLabel prepared, int quad_steps) const;

  Dimension dim() const noexcept { return params_.d; }
  const CharacteristicRootData& roots() const noexcept { return roots_; }

 private:
  ModelParams params_;
  CharacteristicRootData roots_;
  CVector ground_rate_;   // diagonal of A_gg at gamma = 0
  CVector excited_rate_;  // diagonal of A_ee at gamma = 0
  BlockPropagator relaxation_;
};

/// First order on the uniform grid t_i = i h. The correction advances with
/// C(t + h) = G0(h) C(t) + C(h) G0(t), exact because G0 is a semigroup, so
/// quadrature runs once over [0, h]. Indices must not decrease between calls.
class WeakFirstOrderStepper {
 public:
  WeakFirstOrderStepper(const WeakSolver& solver, double h, AtomicLabel prepared, int quad_steps);

  /// Same contract as WeakSolver::first_order(i h, prepared, quad_steps).
  BlockPropagator at(int i);

 private:
  const WeakSolver& solver_;
  double h_;
  AtomicLabel prepared_;
  int quad_steps_;
  int index_ = 0;
  std::optional<BlockPropagator> step_zero_;        // G0(h)
  std::optional<BlockPropagator> step_correction_;  // C(h), both columns
  BlockPropagator correction_;                      // C(index_ h), prepared column
};

ConditionalPropagators weak_zero_order(const ModelParams& p, AtomicLabel prepared, double t);
ConditionalPropagators weak_first_order(const ModelParams& p, AtomicLabel prepared, double t,
                                        int quad_steps = kDefaultQuadSteps);

// ---------------------------------------------------------------------------
// First-order variation of parameters

/// Relative accuracy demanded from the step-halving error estimate.
inline constexpr double kQuadratureTol = 1e-6;
/// Number of panel doublings tried before giving up.
inline constexpr int kMaxQuadratureRefinements = 8;

/// First-order correction int_0^t G(t-s) V G(s) ds restricted to the
/// prepared column, by composite Simpson quadrature. Starting from
/// quad_steps panels the panel count is doubled until the step-halving
/// estimate |S_2n - S_n| / 15 falls below 1e-6 of the max entry of
/// reference + correction.
template <class Propagate>
BlockPropagator variation_of_parameters(const Propagate& base, const BlockPropagator& perturbation,
                                        const BlockPropagator& reference, double t,
                                        AtomicLabel prepared, int quad_steps);

// ---------------------------------------------------------------------------
// Pre-secular integration

/// Classic RK4 with a fixed step of at most min(0.01/Gamma, 0.01/|Omega|)
/// (or max_step when smaller). Throws StepTooLarge when the total trace
/// drifts by more than 1e-8.
std::vector<AtomFieldState> integrate_presecular(const ModelParams& p, const AtomFieldState& s0,
                                                 std::span<const double> grid,
                                                 double max_step = 0.0);

inline constexpr double kTraceDriftBudget = 1e-8;

}  // namespace condevo

#include "condevo/detail/variation_of_parameters.hpp"
