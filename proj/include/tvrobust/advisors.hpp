#pragma once

// Edge deletion, level amalgamation and elicitation priorities.

#include <optional>
#include <string>
#include <vector>

#include "tvrobust/bounds.hpp"

namespace tvrobust {

struct EdgeRecord {
  VarId parent;
  VarId child;
  double delta;  // per-parent diameter of the child's table for this parent
};

struct EdgeReport {
  std::vector<EdgeRecord> records;  // descending by delta, ties in edge order
};

EdgeReport edge_deletion_report(const BayesNet& net);

struct EdgeDeletion {
  BayesNet net;
  double cost;  // largest TV between an original row and its replacement
};

// Drops `parent` from the child's table by averaging, with equal weights, the
// rows that differ only in that parent's level.
EdgeDeletion delete_edge(const BayesNet& net, VarId parent, VarId child);
EdgeDeletion delete_edge(const BayesNet& net, const std::string& parent, const std::string& child);

struct AmalgamationCandidate {
  std::vector<std::size_t> levels;  // indices of the merged levels
  std::vector<std::string> labels;
  double cost;
};

// Every pair of adjacent levels with its merging cost, cheapest first.
std::vector<AmalgamationCandidate> amalgamation_suggest(const BayesNet& net, VarId variable);

struct AmalgamationOptions {
  // Nominal variables have no meaningful order, so any group may be merged.
  bool allow_nonconsecutive = false;
  // Label of the merged level; defaults to the member labels joined by '+'.
  std::optional<std::string> merged_name;
};

struct TableCost {
  std::string table;  // child of the affected table
  double cost;
};

struct AmalgamationPlan {
  VarId variable;
  std::vector<std::vector<std::string>> groups;  // one per new level, in order
  std::vector<std::string> merged_levels;
  std::vector<TableCost> costs;  // one per table that has `variable` as a parent
  double cost = 0.0;             // the largest of `costs`
};

struct Amalgamation {
  BayesNet net;
  AmalgamationPlan plan;
};

Amalgamation amalgamate_levels(const BayesNet& net, VarId variable, const std::vector<std::size_t>& group,
                               const AmalgamationOptions& opts = {});
Amalgamation amalgamate_levels(const BayesNet& net, const std::string& variable,
                               const std::vector<std::string>& group, const AmalgamationOptions& opts = {});

// d_V^+ between `original` and a coarsened table, matching each original row
// to the merged row its parent configuration maps to. `level_map` sends each
// old level of parent `parent_pos` to its new level.
double matched_row_cost(const Cpt& original, const Cpt& merged, std::size_t parent_pos,
                        const std::vector<std::size_t>& level_map);

struct Priority {
  VarId variable;
  double score;      // impact of the variable's table on the targets
  std::string note;  // why the score is what it is, when not a plain bound
};

// Tables ranked by how far a change in them can move the target margin.
std::vector<Priority> elicitation_priority(const BayesNet& net, const VarSet& targets,
                                           const OracleOptions& opts = {});

}  // namespace tvrobust
