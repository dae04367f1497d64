#include "tvrobust/exact_oracle.hpp"

#include <algorithm>
#include <limits>

namespace tvrobust {

std::size_t JointTable::index_of(const std::vector<std::size_t>& config) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < cards.size(); ++k) idx = idx * cards[k] + config[k];
  return idx;
}

std::vector<std::size_t> JointTable::config_of(std::size_t index) const {
  std::vector<std::size_t> config(cards.size());
  for (std::size_t k = cards.size(); k-- > 0;) {
    config[k] = index % cards[k];
    index /= cards[k];
  }
  return config;
}

ProbVec JointTable::as_prob_vec(const BayesNet& net) const { return ProbVec(product_labels(net, scope), mass); }

std::size_t state_space_size(const BayesNet& net, const std::vector<VarId>& vars, std::size_t limit) {
  std::size_t total = 1;
  for (VarId v : vars) {
    const std::size_t card = net.cardinality(v);
    if (card != 0 && total > std::numeric_limits<std::size_t>::max() / card) {
      throw ResourceError("state space overflows size_t");
    }
    total *= card;
  }
  if (total > limit) {
    throw ResourceError("state space of " + std::to_string(total) + " configurations exceeds the limit of " +
                        std::to_string(limit));
  }
  return total;
}

std::vector<std::string> product_labels(const BayesNet& net, const std::vector<VarId>& vars) {
  std::vector<std::string> labels{""};
  for (std::size_t k = 0; k < vars.size(); ++k) {
    std::vector<std::string> next;
    for (const auto& prefix : labels)
      for (const auto& l : net.variable(vars[k]).levels) next.push_back(k == 0 ? l : prefix + "," + l);
    labels = std::move(next);
  }
  return labels;
}

JointTable joint_mass(const BayesNet& net, const OracleOptions& opts) {
  JointTable joint;
  for (VarId v = 0; v < net.size(); ++v) {
    joint.scope.push_back(v);
    joint.cards.push_back(net.cardinality(v));
  }
  const std::size_t total = state_space_size(net, joint.scope, opts.state_limit);

  // Per variable: its table and the positions of its parents in the scope.
  struct Factor {
    const Cpt* cpt;
    std::vector<VarId> parents;
  };
  std::vector<Factor> factors;
  for (VarId v = 0; v < net.size(); ++v) factors.push_back({&net.cpt(v), net.parents(v)});

  joint.mass.resize(static_cast<Index>(total));
  std::vector<std::size_t> config(net.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    double p = 1.0;
    for (VarId v = 0; v < net.size(); ++v) {
      const auto& f = factors[v];
      Index row = 0;
      for (VarId pa : f.parents) row = row * static_cast<Index>(net.cardinality(pa)) + static_cast<Index>(config[pa]);
      p *= f.cpt->table()(row, static_cast<Index>(config[v]));
    }
    joint.mass(static_cast<Index>(idx)) = p;
    // odometer, last variable fastest
    for (std::size_t k = net.size(); k-- > 0;) {
      if (++config[k] < joint.cards[k]) break;
      config[k] = 0;
    }
  }
  return joint;
}

JointTable marginal(const JointTable& joint, const VarSet& keep) {
  JointTable out;
  std::vector<std::size_t> positions;
  for (VarId v : keep) {
    auto it = std::find(joint.scope.begin(), joint.scope.end(), v);
    if (it == joint.scope.end()) throw DomainError("marginal: variable " + std::to_string(v) + " not in scope");
    positions.push_back(static_cast<std::size_t>(it - joint.scope.begin()));
    out.scope.push_back(v);
    out.cards.push_back(joint.cards[positions.back()]);
  }
  std::size_t total = 1;
  for (auto c : out.cards) total *= c;
  out.mass = Eigen::VectorXd::Zero(static_cast<Index>(total));

  std::vector<std::size_t> config(joint.cards.size(), 0);
  for (Index idx = 0; idx < joint.mass.size(); ++idx) {
    std::size_t sub = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) sub = sub * out.cards[k] + config[positions[k]];
    out.mass(static_cast<Index>(sub)) += joint.mass(idx);
    for (std::size_t k = config.size(); k-- > 0;) {
      if (++config[k] < joint.cards[k]) break;
      config[k] = 0;
    }
  }
  return out;
}

JointTable marginal(const BayesNet& net, const VarSet& keep, const OracleOptions& opts) {
  if (keep.empty()) throw DomainError("marginal: empty variable set");
  return marginal(joint_mass(net, opts), keep);
}

Cpt conditional_table(const BayesNet& net, const JointTable& joint, const VarSet& A, const VarSet& B) {
  if (A.empty()) throw DomainError("conditional_table: empty target set");
  for (VarId a : A)
    if (B.count(a)) throw DomainError("conditional_table: '" + net.name(a) + "' is on both sides");

  VarSet both = A;
  both.insert(B.begin(), B.end());
  const JointTable ab = marginal(joint, both);

  const std::vector<VarId> a_vars(A.begin(), A.end());
  const std::vector<VarId> b_vars(B.begin(), B.end());
  std::size_t n_rows = 1, n_cols = 1;
  for (VarId v : b_vars) n_rows *= net.cardinality(v);
  for (VarId v : a_vars) n_cols *= net.cardinality(v);

  // position of each scope entry of `ab` within A or B
  Cpt::Table table = Cpt::Table::Zero(static_cast<Index>(n_rows), static_cast<Index>(n_cols));
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(ab.mass.size()); ++idx) {
    const auto config = ab.config_of(idx);
    std::size_t row = 0, col = 0;
    for (std::size_t k = 0; k < ab.scope.size(); ++k) {
      const VarId v = ab.scope[k];
      if (A.count(v))
        col = col * net.cardinality(v) + config[k];
      else
        row = row * net.cardinality(v) + config[k];
    }
    table(static_cast<Index>(row), static_cast<Index>(col)) += ab.mass(static_cast<Index>(idx));
  }

  std::vector<std::vector<std::string>> parent_levels;
  for (VarId v : b_vars) parent_levels.push_back(net.variable(v).levels);
  const auto b_labels = product_labels(net, b_vars);
  for (Index r = 0; r < table.rows(); ++r) {
    double s = 0.0;
    for (Index c = 0; c < table.cols(); ++c) s += table(r, c);
    if (!(s > 0.0)) {
      throw DomainError("conditional_table: conditioning configuration (" + b_labels[static_cast<std::size_t>(r)] +
                        ") of {" + detail::join(net.names(B), ",") + "} has zero probability");
    }
    table.row(r) /= s;
  }
  return Cpt(detail::join(net.names(A), ","), product_labels(net, a_vars), net.names(B), std::move(parent_levels),
             std::move(table));
}

Cpt conditional_table(const BayesNet& net, const VarSet& A, const VarSet& B, const OracleOptions& opts) {
  return conditional_table(net, joint_mass(net, opts), A, B);
}

}  // namespace tvrobust
