#pragma once

// Brute-force exact inference by dense enumeration of the joint state space.
// Deliberately simple: it is the reference every bound is checked against.

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "tvrobust/bn_model.hpp"

namespace tvrobust {

struct OracleOptions {
  std::size_t state_limit = std::size_t{1} << 22;
};

// Dense table over the product space of `scope`, mixed-radix with the first
// scope variable most significant (the same convention as Cpt rows).
struct JointTable {
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  Eigen::VectorXd mass;

  std::size_t index_of(const std::vector<std::size_t>& config) const;
  std::vector<std::size_t> config_of(std::size_t index) const;
  ProbVec as_prob_vec(const BayesNet& net) const;
};

// Product of the cardinalities of `vars`, or ResourceError if it exceeds `limit`.
std::size_t state_space_size(const BayesNet& net, const std::vector<VarId>& vars, std::size_t limit);

JointTable joint_mass(const BayesNet& net, const OracleOptions& opts = {});

// Sums the joint over the complement of `keep`; scope is `keep` in ascending id order.
JointTable marginal(const JointTable& joint, const VarSet& keep);
JointTable marginal(const BayesNet& net, const VarSet& keep, const OracleOptions& opts = {});

// P(X_A | X_B) as a table: one row per B configuration, one column per A
// configuration. A and B must be disjoint and A non-empty. The child label is
// the comma-joined names of A and column labels are comma-joined level names.
// A zero-probability B configuration is a DomainError naming it.
Cpt conditional_table(const BayesNet& net, const JointTable& joint, const VarSet& A, const VarSet& B);
Cpt conditional_table(const BayesNet& net, const VarSet& A, const VarSet& B, const OracleOptions& opts = {});

// Level labels of the product space of `vars` ("yes,below", ...).
std::vector<std::string> product_labels(const BayesNet& net, const std::vector<VarId>& vars);

}  // namespace tvrobust
