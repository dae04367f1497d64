#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tvrobust/tv_core.hpp"

namespace tvrobust {

// Variables are identified by their position in declaration order.
using VarId = std::size_t;
using VarSet = std::set<VarId>;

struct Variable {
  std::string name;
  std::vector<std::string> levels;

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Edge {
  VarId parent;
  VarId child;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// A discrete Bayesian network. The DAG is implied by the parent lists of the
// attached tables: edge (p, c) exists iff p is listed as a parent in c's table.
// Construction performs no validation; call validate() before relying on the
// structural invariants.
class BayesNet {
 public:
  BayesNet() = default;
  BayesNet(std::vector<Variable> variables, std::vector<Cpt> cpts);

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<Cpt>& cpts() const noexcept { return cpts_; }
  std::size_t size() const noexcept { return variables_.size(); }

  const Variable& variable(VarId v) const { return variables_.at(v); }
  const std::string& name(VarId v) const { return variables_.at(v).name; }
  std::size_t cardinality(VarId v) const { return variables_.at(v).levels.size(); }

  std::optional<VarId> find(std::string_view name) const;
  // Throws DomainError for unknown names.
  VarId id(std::string_view name) const;
  VarSet ids(const std::vector<std::string>& names) const;
  std::vector<std::string> names(const VarSet& vars) const;

  bool has_cpt(VarId v) const;
  // The table whose child is `v`; throws DomainError if there is none.
  const Cpt& cpt(VarId v) const;

  // Parents in table order; unknown parent names are skipped.
  std::vector<VarId> parents(VarId v) const;
  std::vector<VarId> children(VarId v) const;
  // Ordered by child declaration order, then by parent order within the table.
  std::vector<Edge> edges() const;

  VarSet descendants(VarId v) const;

  friend bool operator==(const BayesNet& a, const BayesNet& b) {
    return a.variables_ == b.variables_ && a.cpts_ == b.cpts_;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
  std::map<std::string, VarId, std::less<>> index_;
  std::map<VarId, std::size_t> cpt_of_;
};

struct Violation {
  std::string rule;     // e.g. "acyclic", "row-sum"
  std::string subject;  // variable or edge the rule is about
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Empty iff the network satisfies every structural and numerical invariant.
std::vector<Violation> validate(const BayesNet& net);

// Kahn's algorithm; among ready variables the earliest declared goes first.
// Throws DomainError when the graph has a cycle.
std::vector<VarId> topological_order(const BayesNet& net);

// `targets` together with all of their ancestors.
VarSet ancestral_set(const BayesNet& net, const VarSet& targets);
VarSet ancestral_set(const BayesNet& net, const std::vector<std::string>& targets);

// The sub-network on a parent-closed variable set (declaration order kept).
BayesNet induced_subnet(const BayesNet& net, const VarSet& keep);

}  // namespace tvrobust
