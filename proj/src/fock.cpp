#include "condevo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "condevo/error.hpp"

namespace condevo {

Dimension::Dimension(int d) : d_(d) {
  if (d < 1) throw Error(ErrorCode::InvalidDimension, "dimension must be >= 1, got " + std::to_string(d));
}

CMatrix annihilation(Dimension d) {
  CMatrix a = CMatrix::Zero(d.value(), d.value());
  for (int n = 1; n < d.value(); ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix creation(Dimension d) { return annihilation(d).adjoint(); }

CMatrix number_operator(Dimension d) {
  CMatrix n = CMatrix::Zero(d.value(), d.value());
  for (int k = 0; k < d.value(); ++k) n(k, k) = static_cast<double>(k);
  return n;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

FieldDensityMatrix::FieldDensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw Error(ErrorCode::InvalidState, "density matrix must be square and non-empty");
  }
  if (max_abs(entries_ - entries_.adjoint()) > kHermitianTol) {
    throw Error(ErrorCode::InvalidState, "density matrix is not Hermitian");
  }
  const cplx tr = entries_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw Error(ErrorCode::InvalidState, "density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kEigenvalueTol) {
    throw Error(ErrorCode::InvalidState, "density matrix has a negative eigenvalue");
  }
}

FieldDensityMatrix fock_state(Dimension d, int n) {
  if (n < 0 || n >= d.value()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "Fock index " + std::to_string(n) + " outside [0, " + std::to_string(d.value() - 1) + "]");
  }
  CMatrix rho = CMatrix::Zero(d.value(), d.value());
  rho(n, n) = 1.0;
  return FieldDensityMatrix(std::move(rho));
}

FieldDensityMatrix mixed_state(Dimension d) {
  CMatrix rho = CMatrix::Identity(d.value(), d.value()) / static_cast<double>(d.value());
  return FieldDensityMatrix(std::move(rho));
}

Eigensystem hermitian_eigensystem(const CMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "eigensystem of a non-square matrix");
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.adjoint()) > 1e-10 * scale) {
    throw Error(ErrorCode::NonHermitianInput, "matrix is not Hermitian within 1e-10");
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NonHermitianInput, "Hermitian eigendecomposition failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace condevo
