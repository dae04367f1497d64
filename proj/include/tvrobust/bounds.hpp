#pragma once

// Propagation and composition bounds on total variation.

#include <algorithm>
#include <string>
#include <vector>

#include "tvrobust/jtree.hpp"
#include "tvrobust/tv_core.hpp"

namespace tvrobust {

namespace detail {

inline void require_unit(double x, const char* op, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(op) + ": " + what + " = " + std::to_string(x) + " is outside [0, 1]");
  }
}

}  // namespace detail

template <typename Scalar>
struct OverlapDecomposition {
  Scalar beta;
  ProbVector<Scalar> common;
  ProbVector<Scalar> residual_1;
  ProbVector<Scalar> residual_2;
};

// Writes p_i = beta * common + (1 - beta) * residual_i with common proportional
// to the pointwise minimum. beta is exactly 1 - tv_distance(p1, p2).
template <typename Scalar>
OverlapDecomposition<Scalar> overlap_decompose(const ProbVector<Scalar>& p1, const ProbVector<Scalar>& p2) {
  if (p1.levels() != p2.levels()) throw DomainError("overlap_decompose: level sets differ");
  const Index n = p1.size();
  const Scalar tv = tv_distance(p1.mass(), p2.mass());
  const Scalar beta = Scalar(1) - tv;

  VectorX<Scalar> low = p1.mass().cwiseMin(p2.mass());
  const Scalar low_sum = low.sum();
  VectorX<Scalar> common = low_sum > Scalar(0) ? VectorX<Scalar>(low / low_sum) : VectorX<Scalar>::Constant(n, Scalar(1) / Scalar(n));

  auto residual = [&](const VectorX<Scalar>& p) -> VectorX<Scalar> {
    VectorX<Scalar> r = p - low;
    const Scalar s = r.sum();
    if (!(s > Scalar(0))) return common;
    return r / s;
  };
  return {beta, ProbVector<Scalar>(p1.levels(), common), ProbVector<Scalar>(p1.levels(), residual(p1.mass())),
          ProbVector<Scalar>(p1.levels(), residual(p2.mass()))};
}

// d+(P) * d_pi: how far two parent margins at distance d_pi can push the child margin.
template <typename Scalar>
Scalar propagate_bound(Scalar d_pi, const CondTable<Scalar>& P) {
  detail::require_unit(static_cast<double>(d_pi), "propagate_bound", "d_pi");
  return diameter(P) * d_pi;
}

// Margins and tables both perturbed: the smaller of the superbound form and
// the diameter form, clamped to 1.
template <typename Scalar>
Scalar joint_perturb_bound(Scalar d_pi, const CondTable<Scalar>& P1, const CondTable<Scalar>& P2) {
  detail::require_unit(static_cast<double>(d_pi), "joint_perturb_bound", "d_pi");
  const Scalar plus = cpt_tv_plus(P1, P2);
  const Scalar star = cpt_superbound(P1, P2).value;
  const Scalar by_star = plus + d_pi * star;
  const Scalar by_diameter = (Scalar(1) + d_pi) * plus + d_pi * std::max(diameter(P1), diameter(P2));
  return std::min({Scalar(1), by_star, by_diameter});
}

// TV between two joints, given the TV of their first margins and the worst
// TV between their conditionals.
inline double joint_tv_bound(double dv_marginal, double sup_conditional_tv) {
  detail::require_unit(dv_marginal, "joint_tv_bound", "marginal distance");
  detail::require_unit(sup_conditional_tv, "joint_tv_bound", "conditional distance");
  return std::min(1.0, dv_marginal + sup_conditional_tv);
}

// Diameter of P(Y1, Y2 | X) from d+(P(Y1 | X)) and d+(P(Y2 | X, Y1)).
inline double chain_diameter_bound(double d1, double d2) {
  detail::require_unit(d1, "chain_diameter_bound", "d1");
  detail::require_unit(d2, "chain_diameter_bound", "d2");
  return std::min(1.0, d1 + d2);
}

template <typename Scalar>
Scalar diameter_sum_bound(const CondTable<Scalar>& P) {
  Scalar sum = Scalar(0);
  for (std::size_t j = 0; j < P.parents().size(); ++j) sum += parent_diameter(P, j);
  return std::min(Scalar(1), sum);
}

// ---------------------------------------------------------------------------
// Clique-path impact.

enum class ImpactMode { ExactDiameter, LemmaComposed };

std::string to_string(ImpactMode mode);
// Accepts "exact", "exact-diameter", "bound", "lemma", "lemma-composed".
ImpactMode parse_impact_mode(const std::string& text);

struct Factor {
  std::string table;       // e.g. "P(X4 | X2)"
  double value = 0.0;      // the factor's diameter or bound on it
  std::string provenance;  // how the value was obtained
};

struct BoundResult {
  double value = 1.0;
  ImpactMode mode = ImpactMode::ExactDiameter;
  std::vector<Factor> certificate;
};

// Bound on d+(P(Y | X)) assembled from the model's own table diameters.
// Throws DomainError when no bound can be assembled (the message names the gap).
Factor lemma_link_bound(const BayesNet& net, const VarSet& X, const VarSet& Y);

// Product of the link diameters along `path`; a single-clique path is 1.
BoundResult path_impact(const BayesNet& net, const CliquePath& path, ImpactMode mode, const OracleOptions& opts = {});

// Reduction followed by path_impact.
struct ImpactReport {
  Reduction reduction;
  BoundResult bound;
};
ImpactReport impact_between(const BayesNet& net, const VarSet& donor, const VarSet& target, ImpactMode mode,
                            const OracleOptions& opts = {}, const ReductionOptions& ropts = {});

}  // namespace tvrobust
