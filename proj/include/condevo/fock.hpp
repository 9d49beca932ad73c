#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace condevo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Number of retained Fock levels |0>..|d-1> of the cavity mode.
class Dimension {
 public:
  explicit Dimension(int d);

  int value() const noexcept { return d_; }
  int squared() const noexcept { return d_ * d_; }

  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

/// Truncated annihilation operator: a|n> = sqrt(n)|n-1>.
/// The creation operator is its adjoint, so a^dagger |d-1> = 0.
CMatrix annihilation(Dimension d);
CMatrix creation(Dimension d);
CMatrix number_operator(Dimension d);  // a^dagger a

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
class FieldDensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenvalueTol = 1e-10;

  /// Validates the density-matrix invariants; throws InvalidState otherwise.
  explicit FieldDensityMatrix(CMatrix entries);

  const CMatrix& matrix() const noexcept { return entries_; }
  Dimension dim() const { return Dimension(static_cast<int>(entries_.rows())); }

 private:
  CMatrix entries_;
};

FieldDensityMatrix fock_state(Dimension d, int n);
FieldDensityMatrix mixed_state(Dimension d);

struct Eigensystem {
  RVector values;   // ascending
  CMatrix vectors;  // columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized
/// as (M + M^dagger)/2 first; asymmetry above 1e-10 (relative to the
/// largest entry, floor 1) is rejected.
Eigensystem hermitian_eigensystem(const CMatrix& m);

/// Largest absolute entry.
double max_abs(const CMatrix& m);

}  // namespace condevo
