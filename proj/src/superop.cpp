#include "condevo/superop.hpp"

#include <cmath>
#include <string>

#include "condevo/error.hpp"

namespace condevo {

namespace {

void require_same_dim(Dimension a, Dimension b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": dimensions " + std::to_string(a.value()) + " and " +
                    std::to_string(b.value()) + " differ");
  }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Superoperator::Superoperator(Dimension d)
    : dim_(d), dense_(CMatrix::Zero(d.squared(), d.squared())) {}

Superoperator::Superoperator(Dimension d, CMatrix dense) : dim_(d), dense_(std::move(dense)) {
  if (dense_.rows() != d.squared() || dense_.cols() != d.squared()) {
    throw Error(ErrorCode::DimensionMismatch, "superoperator matrix must be d^2 x d^2");
  }
}

Superoperator Superoperator::identity(Dimension d) {
  return Superoperator(d, CMatrix::Identity(d.squared(), d.squared()));
}

Superoperator Superoperator::sandwich(const CMatrix& left, const CMatrix& right) {
  if (left.rows() != left.cols() || right.rows() != right.cols() || left.rows() != right.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "sandwich: operands must be square and equal-sized");
  }
  // Row-major vec: vec(L X R) = (L (x) R^T) vec(X).
  return Superoperator(Dimension(static_cast<int>(left.rows())), kron(left, right.transpose()));
}

CVector flatten(const CMatrix& x) {
  const auto d = x.rows();
  CVector v(x.size());
  for (Eigen::Index m = 0; m < d; ++m)
    for (Eigen::Index n = 0; n < x.cols(); ++n) v(m * x.cols() + n) = x(m, n);
  return v;
}

CMatrix unflatten(const CVector& v, Dimension d) {
  if (v.size() != d.squared()) throw Error(ErrorCode::DimensionMismatch, "unflatten: length is not d^2");
  CMatrix x(d.value(), d.value());
  for (int m = 0; m < d.value(); ++m)
    for (int n = 0; n < d.value(); ++n) x(m, n) = v(unit_index(m, n, d));
  return x;
}

CMatrix matrix_unit(int m, int n, Dimension d) {
  if (m < 0 || n < 0 || m >= d.value() || n >= d.value()) {
    throw Error(ErrorCode::IndexOutOfRange, "matrix unit index out of range");
  }
  CMatrix e = CMatrix::Zero(d.value(), d.value());
  e(m, n) = 1.0;
  return e;
}

CMatrix Superoperator::apply(const CMatrix& x) const {
  if (x.rows() != dim_.value() || x.cols() != dim_.value()) {
    throw Error(ErrorCode::DimensionMismatch, "apply: operand is not d x d");
  }
  return unflatten(dense_ * flatten(x), dim_);
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  require_same_dim(dim_, other.dim_, "superoperator sum");
  dense_ += other.dense_;
  return *this;
}

Superoperator& Superoperator::operator-=(const Superoperator& other) {
  require_same_dim(dim_, other.dim_, "superoperator difference");
  dense_ -= other.dense_;
  return *this;
}

Superoperator& Superoperator::operator*=(cplx s) {
  dense_ *= s;
  return *this;
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  require_same_dim(a.dim_, b.dim_, "superoperator composition");
  return Superoperator(a.dim_, a.dense_ * b.dense_);
}

Superoperator operator+(Superoperator a, cplx s) { return a += s * Superoperator::identity(a.dim()); }
Superoperator operator-(Superoperator a, cplx s) { return a -= s * Superoperator::identity(a.dim()); }

Superoperator elementary(Elementary kind, Dimension d) {
  const CMatrix a = annihilation(d);
  const CMatrix ad = creation(d);
  const CMatrix id = CMatrix::Identity(d.value(), d.value());
  switch (kind) {
    case Elementary::K0:
      return lowered_k0(d) + 0.5;
    case Elementary::KPlus:
      return Superoperator::sandwich(ad, a);
    case Elementary::KMinus:
      return Superoperator::sandwich(a, ad);
    case Elementary::N:
      return Superoperator::sandwich(number_operator(d), id) - Superoperator::sandwich(id, number_operator(d));
  }
  throw Error(ErrorCode::ValidationError, "unknown elementary superoperator");
}

Superoperator lowered_k0(Dimension d) {
  const CMatrix n = number_operator(d);
  const CMatrix id = CMatrix::Identity(d.value(), d.value());
  return 0.5 * (Superoperator::sandwich(n, id) + Superoperator::sandwich(id, n));
}

Superoperator raised_k0(Dimension d) {
  const CMatrix a = annihilation(d);
  const CMatrix aad = a * a.adjoint();
  const CMatrix id = CMatrix::Identity(d.value(), d.value());
  return 0.5 * (Superoperator::sandwich(aad, id) + Superoperator::sandwich(id, aad));
}

Superoperator commutator(const Superoperator& s, const Superoperator& t) { return s * t - t * s; }

Superoperator casimir(Dimension d) {
  const Superoperator k0 = elementary(Elementary::K0, d);
  return k0 * k0 - k0 - elementary(Elementary::KPlus, d) * elementary(Elementary::KMinus, d);
}

std::vector<int> offset_units(Dimension d, int offset) {
  if (std::abs(offset) >= d.value()) throw Error(ErrorCode::IndexOutOfRange, "offset out of range");
  std::vector<int> units;
  const int count = d.value() - std::abs(offset);
  units.reserve(count);
  for (int n = 0; n < count; ++n) {
    units.push_back(offset >= 0 ? unit_index(n + offset, n, d) : unit_index(n, n - offset, d));
  }
  return units;
}

std::vector<OffsetBlock> offset_blocks(const Superoperator& s) {
  const Dimension d = s.dim();
  const int dv = d.value();
  const CMatrix& dense = s.dense();
  for (int p = 0; p < d.squared(); ++p) {
    for (int q = 0; q < d.squared(); ++q) {
      const int kp = p / dv - p % dv;
      const int kq = q / dv - q % dv;
      if (kp != kq && std::abs(dense(p, q)) > kOffsetLeakTol) {
        throw Error(ErrorCode::NotOffsetPreserving,
                    "superoperator couples offsets " + std::to_string(kq) + " -> " + std::to_string(kp));
      }
    }
  }
  std::vector<OffsetBlock> blocks;
  for (int k = -(dv - 1); k <= dv - 1; ++k) {
    OffsetBlock b{k, offset_units(d, k), {}};
    const auto n = static_cast<Eigen::Index>(b.units.size());
    b.block.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) b.block(i, j) = dense(b.units[i], b.units[j]);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

Superoperator assemble(Dimension d, const std::vector<OffsetBlock>& blocks) {
  CMatrix dense = CMatrix::Zero(d.squared(), d.squared());
  for (const auto& b : blocks) {
    const auto n = static_cast<Eigen::Index>(b.units.size());
    if (b.block.rows() != n || b.block.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "offset block size does not match its units");
    }
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) dense(b.units[i], b.units[j]) = b.block(i, j);
  }
  return Superoperator(d, std::move(dense));
}

CVector diagonal_values(const Superoperator& s) {
  CMatrix off = s.dense();
  off.diagonal().setZero();
  if (max_abs(off) > kDiagonalTol) {
    throw Error(ErrorCode::NotDiagonal, "superoperator is not diagonal in the matrix-unit basis");
  }
  return s.dense().diagonal();
}

Superoperator scalar_function_of_diagonal(const Superoperator& s, const std::function<cplx(cplx)>& f) {
  const CVector diag = diagonal_values(s);
  CMatrix out = CMatrix::Zero(diag.size(), diag.size());
  for (Eigen::Index p = 0; p < diag.size(); ++p) out(p, p) = f(diag(p));
  return Superoperator(s.dim(), std::move(out));
}

CMatrix choi(const Superoperator& s) {
  const Dimension d = s.dim();
  const int dv = d.value();
  CMatrix c(d.squared(), d.squared());
  for (int m = 0; m < dv; ++m) {
    for (int n = 0; n < dv; ++n) {
      const CMatrix image = unflatten(s.dense().col(unit_index(m, n, d)), d);
      c.block(m * dv, n * dv, dv, dv) = image;
    }
  }
  return c;
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const Superoperator& s) {
  return {{"d", s.dim().value()},
          {"ordering", "row-major matrix units: p = m * d + n for E_{m,n}"},
          {"matrix", matrix_to_json(s.dense())}};
}

}  // namespace condevo
