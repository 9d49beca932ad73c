#pragma once

#include "condevo/solvers.hpp"

namespace condevo {

inline constexpr double kProbabilityImagTol = 1e-9;
inline constexpr double kProbabilitySlack = 1e-6;
inline constexpr double kMinBranchProbability = 1e-12;
inline constexpr double kNegativeEigenvalueTol = 1e-8;
inline constexpr double kEntropyEigenvalueFloor = 1e-14;
inline constexpr double kFidelitySlack = 1e-8;

/// P = Re Tr[M rho], clamped into [0, 1] after checking it lies within
/// [-1e-6, 1 + 1e-6] and that the imaginary residue is below 1e-9.
double detection_probability(const Superoperator& m, const FieldDensityMatrix& rho);

/// M rho / Tr[M rho], symmetrized, with small negative eigenvalues clamped.
/// Throws ZeroProbabilityBranch for a vanishing trace and NonphysicalState
/// when an eigenvalue is below -1e-8.
FieldDensityMatrix conditional_state(const Superoperator& m, const FieldDensityMatrix& rho);

/// Von Neumann entropy in nats.
double von_neumann_entropy(const FieldDensityMatrix& rho);

/// S(before) - S(after).
double information_gain(const FieldDensityMatrix& before, const FieldDensityMatrix& after);

/// Root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).
double uhlmann_fidelity(const FieldDensityMatrix& rho, const FieldDensityMatrix& sigma);

struct MeasurementRecord {
  AtomicLabel prepared;
  AtomicLabel detected;
  double t;
  double probability;
  double info_gain;
  double fidelity;
  FieldDensityMatrix conditional_state;
};

struct SolverOptions {
  Method method = Method::exact;
  int order = 1;
  int quad_steps = kDefaultQuadSteps;
};

/// Runs the selected solver for one preparation.
ConditionalPropagators solve(const ModelParams& p, AtomicLabel prepared, double t,
                             const SolverOptions& options);

MeasurementRecord measure(const ConditionalPropagators& props, AtomicLabel detected,
                          const FieldDensityMatrix& rho0);
MeasurementRecord measure(const ModelParams& p, AtomicLabel prepared, AtomicLabel detected,
                          const FieldDensityMatrix& rho0, double t, const SolverOptions& options);

}  // namespace condevo
