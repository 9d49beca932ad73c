#pragma once

#include <cmath>
#include <sstream>
#include <utility>

#include "condevo/error.hpp"

namespace condevo {

namespace detail {

// Column half [first, first + n) of a 2n x 2n sector for the preparation.
inline int prepared_column_offset(int n, AtomicLabel prepared) {
  return prepared == AtomicLabel::g ? 0 : n;
}

}  // namespace detail

template <class Propagate>
BlockPropagator variation_of_parameters(const Propagate& base, const BlockPropagator& perturbation,
                                        const BlockPropagator& reference, double t,
                                        AtomicLabel prepared, int quad_steps) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "variation_of_parameters: negative time");
  if (quad_steps < 8 || quad_steps % 2 != 0) {
    throw Error(ErrorCode::ValidationError, "quad_steps must be even and at least 8");
  }

  const Dimension d = reference.dim();
  const int sectors = reference.sector_count();
  BlockPropagator correction(d);
  if (t == 0.0) return correction;

  using Values = std::vector<CMatrix>;  // one prepared-column slab per sector

  // Propagators and integrand values on the current node set.
  int panels = quad_steps;
  std::vector<BlockPropagator> props;
  props.reserve(panels + 1);
  for (int i = 0; i <= panels; ++i) props.push_back(base(t * i / panels));

  auto integrand = [&](int i, int n_panels) {
    const BlockPropagator& late = props[n_panels - i];
    const BlockPropagator& early = props[i];
    Values out(sectors);
    for (int k = 0; k < sectors; ++k) {
      const int n = static_cast<int>(reference.units(k).size());
      const int c0 = detail::prepared_column_offset(n, prepared);
      out[k] = late.sector(k) * (perturbation.sector(k) * early.sector(k).middleCols(c0, n));
    }
    return out;
  };

  std::vector<Values> values;
  values.reserve(panels + 1);
  for (int i = 0; i <= panels; ++i) values.push_back(integrand(i, panels));

  auto simpson = [&](int n_panels) {
    const double h = t / n_panels;
    Values sum(sectors);
    for (int k = 0; k < sectors; ++k) {
      sum[k] = values[0][k] + values[n_panels][k];
      for (int i = 1; i < n_panels; ++i) sum[k] += (i % 2 == 1 ? 4.0 : 2.0) * values[i][k];
      sum[k] *= h / 3.0;
    }
    return sum;
  };

  Values coarse = simpson(panels);
  double estimate = 0.0;
  for (int level = 0; level <= kMaxQuadratureRefinements; ++level) {
    // Halve the step: old node i becomes 2i, odd nodes are new.
    const int fine = 2 * panels;
    std::vector<BlockPropagator> fine_props;
    fine_props.reserve(fine + 1);
    for (int i = 0; i <= fine; ++i) {
      fine_props.push_back(i % 2 == 0 ? std::move(props[i / 2]) : base(t * i / fine));
    }
    props = std::move(fine_props);
    std::vector<Values> fine_values;
    fine_values.reserve(fine + 1);
    for (int i = 0; i <= fine; ++i) {
      fine_values.push_back(i % 2 == 0 ? std::move(values[i / 2]) : integrand(i, fine));
    }
    values = std::move(fine_values);
    panels = fine;

    Values refined = simpson(panels);
    estimate = 0.0;
    for (int k = 0; k < sectors; ++k) {
      const int n = static_cast<int>(reference.units(k).size());
      const int c0 = detail::prepared_column_offset(n, prepared);
      correction.sector(k).middleCols(c0, n) = refined[k];
      estimate = std::max(estimate, (refined[k] - coarse[k]).cwiseAbs().maxCoeff() / 15.0);
    }
    double scale = 0.0;
    for (int k = 0; k < sectors; ++k) {
      scale = std::max(scale, (reference.sector(k) + correction.sector(k)).cwiseAbs().maxCoeff());
    }
    if (estimate <= kQuadratureTol * scale) return correction;
    coarse = std::move(refined);
  }

  std::ostringstream msg;
  msg << "quadrature not converged at t = " << t << " after " << panels
      << " panels (estimate " << estimate << ")";
  throw Error(ErrorCode::QuadratureNotConverged, msg.str());
}

}  // namespace condevo
