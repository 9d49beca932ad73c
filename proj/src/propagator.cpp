#include <string>

#include "condevo/error.hpp"
#include "condevo/solvers.hpp"

namespace condevo {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::exact: return "exact";
    case Method::strong: return "strong";
    case Method::weak: return "weak";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "exact") return Method::exact;
  if (text == "strong") return Method::strong;
  if (text == "weak") return Method::weak;
  throw Error(ErrorCode::ValidationError, "method must be exact, strong or weak, got '" + std::string(text) + "'");
}

namespace {

std::shared_ptr<const std::vector<std::vector<int>>> sector_units(Dimension d) {
  auto units = std::make_shared<std::vector<std::vector<int>>>();
  for (int k = -(d.value() - 1); k <= d.value() - 1; ++k) units->push_back(offset_units(d, k));
  return units;
}

}  // namespace

BlockPropagator::BlockPropagator(Dimension d) : dim_(d), units_(sector_units(d)) {
  sectors_.reserve(units_->size());
  for (const auto& u : *units_) {
    const auto n = static_cast<Eigen::Index>(2 * u.size());
    sectors_.push_back(CMatrix::Zero(n, n));
  }
}

BlockPropagator BlockPropagator::identity(Dimension d) {
  BlockPropagator out(d);
  for (auto& s : out.sectors_) s.setIdentity();
  return out;
}

BlockPropagator BlockPropagator::from_generator(const BlockGenerator& a) {
  BlockPropagator out(a.dim());
  const auto gg = offset_blocks(a.gg);
  const auto ge = offset_blocks(a.ge);
  const auto eg = offset_blocks(a.eg);
  const auto ee = offset_blocks(a.ee);
  for (int k = 0; k < out.sector_count(); ++k) {
    out.sectors_[k] << gg[k].block, ge[k].block, eg[k].block, ee[k].block;
  }
  return out;
}

Superoperator BlockPropagator::block(AtomicLabel detected, AtomicLabel prepared) const {
  CMatrix dense = CMatrix::Zero(dim_.squared(), dim_.squared());
  for (int k = 0; k < sector_count(); ++k) {
    const auto& u = units(k);
    const auto n = static_cast<Eigen::Index>(u.size());
    const Eigen::Index r0 = detected == AtomicLabel::g ? 0 : n;
    const Eigen::Index c0 = prepared == AtomicLabel::g ? 0 : n;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) dense(u[i], u[j]) = sectors_[k](r0 + i, c0 + j);
  }
  return Superoperator(dim_, std::move(dense));
}

CMatrix BlockPropagator::dense() const {
  const int n = dim_.squared();
  CMatrix out(2 * n, 2 * n);
  using enum AtomicLabel;
  out << block(g, g).dense(), block(g, e).dense(), block(e, g).dense(), block(e, e).dense();
  return out;
}

BlockPropagator& BlockPropagator::operator+=(const BlockPropagator& other) {
  if (dim_ != other.dim_) throw Error(ErrorCode::DimensionMismatch, "block propagator sum");
  for (std::size_t k = 0; k < sectors_.size(); ++k) sectors_[k] += other.sectors_[k];
  return *this;
}

BlockPropagator& BlockPropagator::operator*=(cplx s) {
  for (auto& m : sectors_) m *= s;
  return *this;
}

BlockPropagator operator*(const BlockPropagator& a, const BlockPropagator& b) {
  if (a.dim_ != b.dim_) throw Error(ErrorCode::DimensionMismatch, "block propagator product");
  BlockPropagator out(a.dim_);
  for (std::size_t k = 0; k < a.sectors_.size(); ++k) out.sectors_[k].noalias() = a.sectors_[k] * b.sectors_[k];
  return out;
}

ConditionalPropagators column(const BlockPropagator& g, AtomicLabel prepared, double t, Method method, int order,
                              bool regime_valid) {
  return ConditionalPropagators{prepared,
                                t,
                                g.block(AtomicLabel::g, prepared),
                                g.block(AtomicLabel::e, prepared),
                                method,
                                order,
                                regime_valid};
}

nlohmann::json to_json(const ConditionalPropagators& props, const ModelParams& p) {
  nlohmann::json params{{"omega", {p.omega.real(), p.omega.imag()}},
                        {"delta", p.delta},
                        {"gamma_phase", p.gamma_phase},
                        {"gamma_ge", p.gamma_ge},
                        {"gamma_eg", p.gamma_eg},
                        {"d", p.d.value()}};
  return nlohmann::json{{"method", std::string(to_string(props.method))},
                        {"order", props.order},
                        {"t", props.t},
                        {"prepared", std::string(to_string(props.prepared))},
                        {"regime_valid", props.regime_valid},
                        {"params", std::move(params)},
                        {"M_g", to_json(props.m_g)},
                        {"M_e", to_json(props.m_e)}};
}

bool strong_regime_valid(const ModelParams& p) {
  const double alpha = derived_constants(p).alpha;
  return p.gamma_ge < alpha && alpha < p.gamma_eg;
}

bool weak_regime_valid(const ModelParams& p) {
  const double alpha = derived_constants(p).alpha;
  return p.gamma_ge <= p.gamma_eg && p.gamma_eg < alpha;
}

}  // namespace condevo
