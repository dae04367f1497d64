#pragma once

// Moralization, triangulation, junction trees and clique paths.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvrobust/bn_model.hpp"
#include "tvrobust/exact_oracle.hpp"

namespace tvrobust {

class UGraph {
 public:
  UGraph() = default;
  explicit UGraph(VarSet vertices);

  void add_edge(VarId a, VarId b);
  bool has_edge(VarId a, VarId b) const;

  const VarSet& vertices() const noexcept { return vertices_; }
  const VarSet& neighbors(VarId v) const;
  // Each edge once, as (smaller, larger), sorted.
  std::vector<std::pair<VarId, VarId>> edges() const;
  std::size_t edge_count() const;

  friend bool operator==(const UGraph&, const UGraph&) = default;

 private:
  VarSet vertices_;
  std::map<VarId, VarSet> adj_;
};

// Undirected skeleton plus an edge between every pair of co-parents.
UGraph moralize(const BayesNet& net);
// Moral graph of the sub-DAG induced on `subset` (used for ancestral graphs).
UGraph moralize(const BayesNet& net, const VarSet& subset);

// Fill edges added by greedy min-fill elimination. Ties go to the vertex that
// comes first in `order_hint` (vertices missing from the hint, or all of them
// when there is no hint, rank by id).
std::vector<std::pair<VarId, VarId>> fill_in_edges(const UGraph& g,
                                                   const std::optional<std::vector<VarId>>& order_hint = std::nullopt);
UGraph triangulate(const UGraph& g, const std::optional<std::vector<VarId>>& order_hint = std::nullopt);

// Maximum cardinality search, ties to the smallest id.
std::vector<VarId> maximum_cardinality_search(const UGraph& g);
bool is_chordal(const UGraph& g);

struct TreeEdge {
  std::size_t a;
  std::size_t b;
  VarSet separator;

  friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

struct JunctionTree {
  std::vector<VarSet> cliques;
  std::vector<TreeEdge> edges;
  // A clique ordering with the running intersection property.
  std::vector<std::size_t> rip_order;

  std::vector<std::size_t> neighbors(std::size_t c) const;
  std::optional<std::size_t> find_clique(const VarSet& members) const;
  // Indices of cliques that contain every variable of `s`.
  std::vector<std::size_t> cliques_containing(const VarSet& s) const;
};

// Maximal cliques of a chordal graph joined by a maximum-weight spanning tree
// (weight = separator size, ties to the lowest clique indices). Components
// are joined through empty separators so the result is always a single tree.
// Throws DomainError on non-chordal input.
JunctionTree build_junction_tree(const UGraph& chordal);

// Independent checkers. Each returns a list of problems, empty when fine.
bool satisfies_running_intersection(const std::vector<VarSet>& cliques, const std::vector<std::size_t>& order);
std::vector<std::string> check_junction_tree(const JunctionTree& jt, const UGraph* chordal = nullptr);

// A repeat-free clique sequence between two cliques of a junction tree,
// together with the donor and target variable sets it links. The chain of
// tables it describes is P(S2 | donor), P(S3 | S2), ..., P(target | Sk).
struct CliquePath {
  std::vector<std::size_t> clique_ids;
  std::vector<VarSet> cliques;
  std::vector<VarSet> separators;  // separators[i] sits between cliques[i] and cliques[i + 1]
  VarSet donor;
  VarSet target;

  std::size_t length() const noexcept { return cliques.size(); }
};

// The unique tree path from clique `from` to clique `to`. Donor defaults to
// C1 minus S2 and target to Ck minus Sk (both whole cliques when from == to).
CliquePath simple_path(const JunctionTree& jt, std::size_t from, std::size_t to);
CliquePath simple_path(const JunctionTree& jt, const VarSet& from, const VarSet& to);

// Conditioning/conditioned pairs of the chain: (donor, S2), (S2, S3), ..., (Sk, target).
// Empty for single-clique paths.
std::vector<std::pair<VarSet, VarSet>> path_links(const CliquePath& path);

struct ReductionOptions {
  // Join the donor variables (and the target variables) pairwise before
  // triangulating so each set lands inside one clique. When false, a set that
  // spans several cliques is rejected.
  bool complete_endpoint_sets = true;
};

struct Reduction {
  VarSet ancestral;
  BayesNet ancestral_net;  // parent-closed, so a valid network on its own
  UGraph triangulated;     // ids refer to the original network
  JunctionTree tree;
  CliquePath path;
  VarSet kept;  // variables of the path cliques; everything else is dropped
};

Reduction donor_target_reduction(const BayesNet& net, const VarSet& donor, const VarSet& target,
                                 const ReductionOptions& opts = {});

// P(Y | X) for arbitrary sets; variables shared by Y and X enter as
// deterministic copies. An empty Y gives a single-column table of ones.
Cpt linked_table(const BayesNet& net, const JointTable& joint, const VarSet& Y, const VarSet& X);

// The chain tables of `path`, computed by exact enumeration.
std::vector<Cpt> path_tables(const BayesNet& net, const CliquePath& path, const OracleOptions& opts = {});

}  // namespace tvrobust
