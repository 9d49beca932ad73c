#include "condevo/generator.hpp"

#include <cmath>
#include <string>

#include "condevo/error.hpp"

namespace condevo {

std::string_view to_string(AtomicLabel label) noexcept { return label == AtomicLabel::g ? "g" : "e"; }

AtomicLabel parse_atomic_label(std::string_view text) {
  if (text == "g") return AtomicLabel::g;
  if (text == "e") return AtomicLabel::e;
  throw Error(ErrorCode::ValidationError, "atomic label must be g or e, got '" + std::string(text) + "'");
}

void validate(const ModelParams& p) {
  const double values[] = {p.omega.real(), p.omega.imag(), p.delta, p.gamma_phase, p.gamma_ge, p.gamma_eg};
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParams, "model parameters must be finite");
  }
  if (p.gamma_phase < 0.0 || p.gamma_ge < 0.0 || p.gamma_eg < 0.0) {
    throw Error(ErrorCode::InvalidParams, "relaxation rates must be non-negative");
  }
  if (p.gamma_phase * p.gamma_phase + p.delta * p.delta == 0.0) {
    throw Error(ErrorCode::DegenerateParams, "gamma_phase and delta both vanish; kappa is undefined");
  }
}

DerivedConstants derived_constants(const ModelParams& p) {
  validate(p);
  const double kappa = std::norm(p.omega) / (p.gamma_phase * p.gamma_phase + p.delta * p.delta);
  const double alpha = kappa * p.gamma_phase;
  const cplx i{0.0, 1.0};
  Superoperator beta = kappa * (i * p.delta * elementary(Elementary::N, p.d) - 0.5 * p.gamma_phase);
  return {kappa, alpha, std::move(beta)};
}

const Superoperator& BlockGenerator::block(AtomicLabel row, AtomicLabel col) const {
  if (row == AtomicLabel::g) return col == AtomicLabel::g ? gg : ge;
  return col == AtomicLabel::g ? eg : ee;
}

CMatrix BlockGenerator::dense() const {
  const int n = dim().squared();
  CMatrix out(2 * n, 2 * n);
  out << gg.dense(), ge.dense(), eg.dense(), ee.dense();
  return out;
}

BlockGenerator conditional_block_generator(const ModelParams& p) {
  const DerivedConstants c = derived_constants(p);
  const Dimension d = p.d;
  const cplx i{0.0, 1.0};
  const Superoperator n = elementary(Elementary::N, d);
  const double detuning = c.kappa * p.delta;
  return BlockGenerator{
      -c.alpha * lowered_k0(d) - i * detuning * n - p.gamma_ge,
      c.alpha * elementary(Elementary::KPlus, d) + p.gamma_eg,
      c.alpha * elementary(Elementary::KMinus, d) + p.gamma_ge,
      -c.alpha * raised_k0(d) + i * detuning * n - p.gamma_eg,
  };
}

namespace {

// theta_jk takes the kk atomic block to the jj block.
Eigen::Matrix2cd theta(AtomicLabel j, AtomicLabel k) {
  Eigen::Matrix2cd t = Eigen::Matrix2cd::Zero();
  t(static_cast<int>(j), static_cast<int>(k)) = 1.0;
  return t;
}

CMatrix atomic_kron(const Eigen::Matrix2cd& atom, const Superoperator& field) {
  const int n = field.dim().squared();
  CMatrix out(2 * n, 2 * n);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.block(r * n, c * n, n, n) = atom(r, c) * field.dense();
  return out;
}

}  // namespace

PairLiouvillian secular_liouvillian(const ModelParams& p) {
  const DerivedConstants c = derived_constants(p);
  const Dimension d = p.d;
  using enum AtomicLabel;
  const cplx i{0.0, 1.0};
  const Superoperator id = Superoperator::identity(d);
  const Superoperator n = elementary(Elementary::N, d);

  // K0 (theta_gg + theta_ee) + (theta_ee - theta_gg)/2 regrouped per block as
  // (K0 - 1/2) theta_gg + (K0 + 1/2) theta_ee in truncation-exact form.
  const CMatrix bracket = atomic_kron(theta(g, g), lowered_k0(d)) + atomic_kron(theta(e, e), raised_k0(d)) -
                          atomic_kron(theta(g, e), elementary(Elementary::KPlus, d)) -
                          atomic_kron(theta(e, g), elementary(Elementary::KMinus, d));
  const CMatrix l0 = -c.alpha * bracket - i * c.kappa * p.delta * atomic_kron(theta(g, g) - theta(e, e), n);

  // sum_{j,k} gamma_jk (theta_kj - theta_jj); the j = k terms cancel.
  const CMatrix lr = p.gamma_ge * atomic_kron(theta(e, g) - theta(g, g), id) +
                     p.gamma_eg * atomic_kron(theta(g, e) - theta(e, e), id);

  return PairLiouvillian{d, l0 + lr};
}

std::array<CMatrix, 2> PairLiouvillian::apply(const CMatrix& rho_gg, const CMatrix& rho_ee) const {
  const int n = dim.squared();
  CVector v(2 * n);
  v << flatten(rho_gg), flatten(rho_ee);
  const CVector out = dense * v;
  return {unflatten(out.head(n), dim), unflatten(out.tail(n), dim)};
}

AtomFieldState AtomFieldState::product(AtomicLabel atom, const FieldDensityMatrix& field) {
  const CMatrix zero = CMatrix::Zero(field.matrix().rows(), field.matrix().cols());
  AtomFieldState s{zero, zero, zero, zero};
  (atom == AtomicLabel::g ? s.gg : s.ee) = field.matrix();
  return s;
}

double AtomFieldState::total_trace() const { return (gg.trace() + ee.trace()).real(); }

AtomFieldState presecular_rhs(const ModelParams& p, const AtomFieldState& s) {
  const int dv = p.d.value();
  for (const CMatrix* blk : {&s.gg, &s.ge, &s.eg, &s.ee}) {
    if (blk->rows() != dv || blk->cols() != dv) {
      throw Error(ErrorCode::DimensionMismatch, "atom-field block is not d x d");
    }
  }
  const CMatrix a = annihilation(p.d);
  const CMatrix ad = a.adjoint();
  const cplx i{0.0, 1.0};
  const cplx w = p.omega;
  const cplx wc = std::conj(p.omega);
  const cplx decay_ge{p.gamma_phase, p.delta};  // Gamma + i Delta

  AtomFieldState ds;
  ds.gg = -i * (wc * ad * s.eg - w * s.ge * a) + p.gamma_eg * s.ee - p.gamma_ge * s.gg;
  ds.ge = -i * (wc * ad * s.ee - wc * s.gg * ad) - decay_ge * s.ge;
  ds.eg = i * (w * s.ee * a - w * a * s.gg) - std::conj(decay_ge) * s.eg;
  ds.ee = -i * (w * a * s.ge - wc * s.eg * ad) + p.gamma_ge * s.gg - p.gamma_eg * s.ee;
  return ds;
}

}  // namespace condevo
