#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "condevo/fock.hpp"

namespace condevo {

/// Flat index of the matrix unit E_{m,n} = |m><n| in every dense
/// superoperator: p = m * d + n.
inline int unit_index(int m, int n, Dimension d) { return m * d.value() + n; }

/// Linear map on d x d matrices, stored as a d^2 x d^2 matrix over the
/// matrix-unit basis (column p holds the image of E_{m,n}).
class Superoperator {
 public:
  explicit Superoperator(Dimension d);
  Superoperator(Dimension d, CMatrix dense);

  static Superoperator identity(Dimension d);
  static Superoperator zero(Dimension d) { return Superoperator(d); }
  /// X -> left * X * right.
  static Superoperator sandwich(const CMatrix& left, const CMatrix& right);

  Dimension dim() const noexcept { return dim_; }
  const CMatrix& dense() const noexcept { return dense_; }

  CMatrix apply(const CMatrix& x) const;

  Superoperator& operator+=(const Superoperator& other);
  Superoperator& operator-=(const Superoperator& other);
  Superoperator& operator*=(cplx s);

  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
  friend Superoperator operator-(Superoperator a, const Superoperator& b) { return a -= b; }
  friend Superoperator operator*(cplx s, Superoperator a) { return a *= s; }
  friend Superoperator operator*(Superoperator a, cplx s) { return a *= s; }
  friend Superoperator operator-(Superoperator a) { return a *= -1.0; }
  /// Composition: (a * b)(X) = a(b(X)).
  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

 private:
  Dimension dim_;
  CMatrix dense_;
};

/// Adds s times the identity superoperator.
Superoperator operator+(Superoperator a, cplx s);
Superoperator operator-(Superoperator a, cplx s);

CVector flatten(const CMatrix& x);
CMatrix unflatten(const CVector& v, Dimension d);
CMatrix matrix_unit(int m, int n, Dimension d);

enum class Elementary { K0, KPlus, KMinus, N };

/// K0 E_{m,n} = (m + n + 1)/2 E_{m,n} on every unit, K+ X = a^dagger X a,
/// K- X = a X a^dagger, N X = [a^dagger a, X], all with truncated a.
/// The su(1,1) relations then hold on units with m, n <= d - 2.
Superoperator elementary(Elementary kind, Dimension d);

/// X -> (a^dagger a X + X a^dagger a)/2 = K0 - 1/2. Pairs with K- in the
/// ground-block generator so its trace-sum vanishes exactly.
Superoperator lowered_k0(Dimension d);
/// X -> (a a^dagger X + X a a^dagger)/2. Equals K0 + 1/2 except on units
/// touching the top Fock level, where a a^dagger vanishes; pairs with K+ in
/// the excited-block generator so its trace-sum vanishes exactly.
Superoperator raised_k0(Dimension d);

Superoperator commutator(const Superoperator& s, const Superoperator& t);

/// C = K0^2 - K0 - K+ K-.
Superoperator casimir(Dimension d);

/// Matrix units with fixed offset k = m - n, ordered by ascending column
/// (k >= 0) or row (k < 0) index.
std::vector<int> offset_units(Dimension d, int offset);

struct OffsetBlock {
  int offset;
  std::vector<int> units;  // flat indices, see offset_units
  CMatrix block;
};

inline constexpr double kOffsetLeakTol = 1e-14;

/// Splits an offset-preserving superoperator into its offset sectors,
/// ordered from k = -(d-1) to k = d-1. Throws NotOffsetPreserving when an
/// entry coupling different offsets exceeds 1e-14.
std::vector<OffsetBlock> offset_blocks(const Superoperator& s);
Superoperator assemble(Dimension d, const std::vector<OffsetBlock>& blocks);

inline constexpr double kDiagonalTol = 1e-14;

/// Diagonal of a superoperator diagonal in the matrix-unit basis.
/// Throws NotDiagonal when an off-diagonal entry exceeds 1e-14.
CVector diagonal_values(const Superoperator& s);

/// Applies f to the diagonal of a matrix-unit-diagonal superoperator.
Superoperator scalar_function_of_diagonal(const Superoperator& s,
                                          const std::function<cplx(cplx)>& f);

/// Choi matrix sum_{m,n} E_{m,n} (x) S(E_{m,n}); PSD iff S is completely
/// positive. Row index m*d + i, column n*d + j.
CMatrix choi(const Superoperator& s);

/// {"d", "ordering", "matrix": [[[re, im], ...], ...]}
nlohmann::json to_json(const Superoperator& s);
nlohmann::json matrix_to_json(const CMatrix& m);

}  // namespace condevo
