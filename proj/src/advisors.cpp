#include "tvrobust/advisors.hpp"

#include <algorithm>

namespace tvrobust {

namespace {

std::size_t parent_position(const Cpt& P, const std::string& parent) {
  const auto& ps = P.parents();
  auto it = std::find(ps.begin(), ps.end(), parent);
  if (it == ps.end()) throw DomainError("'" + parent + "' is not a parent of '" + P.child() + "'");
  return static_cast<std::size_t>(it - ps.begin());
}

// Row of the coarsened table that original row `r` maps to.
Index mapped_row(const Cpt& original, Index r, std::size_t parent_pos, const std::vector<std::size_t>& level_map,
                 const std::vector<std::size_t>& new_cards) {
  auto config = original.config_of(r);
  Index out = 0;
  for (std::size_t k = 0, n = 0; k < config.size(); ++k) {
    std::size_t level = config[k];
    if (k == parent_pos) {
      if (new_cards.size() < config.size()) continue;  // the parent is dropped
      level = level_map[level];
    }
    out = out * static_cast<Index>(new_cards[n]) + static_cast<Index>(level);
    ++n;
  }
  return out;
}

// Averages the rows of P over the levels of parent `parent_pos` that share a
// new level. An empty `new_levels` removes the parent altogether.
Cpt coarsen_parent(const Cpt& P, std::size_t parent_pos, const std::vector<std::size_t>& level_map,
                   const std::vector<std::string>& new_levels) {
  std::vector<std::string> parents = P.parents();
  std::vector<std::vector<std::string>> parent_levels = P.parent_levels();
  if (new_levels.empty()) {
    parents.erase(parents.begin() + static_cast<std::ptrdiff_t>(parent_pos));
    parent_levels.erase(parent_levels.begin() + static_cast<std::ptrdiff_t>(parent_pos));
  } else {
    parent_levels[parent_pos] = new_levels;
  }
  std::vector<std::size_t> new_cards;
  for (const auto& l : parent_levels) new_cards.push_back(l.size());
  Index n_rows = 1;
  for (auto c : new_cards) n_rows *= static_cast<Index>(c);

  Cpt::Table sum = Cpt::Table::Zero(n_rows, P.cols());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(n_rows);
  for (Index r = 0; r < P.rows(); ++r) {
    const Index m = mapped_row(P, r, parent_pos, level_map, new_cards);
    sum.row(m) += P.row(r);
    count(m) += 1.0;
  }
  for (Index m = 0; m < n_rows; ++m) sum.row(m) /= count(m);
  return Cpt(P.child(), P.child_levels(), std::move(parents), std::move(parent_levels), std::move(sum));
}

BayesNet replace_tables(const BayesNet& net, std::vector<Variable> variables, const std::map<VarId, Cpt>& replaced) {
  std::vector<Cpt> cpts;
  for (VarId v = 0; v < net.size(); ++v) {
    auto it = replaced.find(v);
    cpts.push_back(it == replaced.end() ? net.cpt(v) : it->second);
  }
  return BayesNet(std::move(variables), std::move(cpts));
}

}  // namespace

EdgeReport edge_deletion_report(const BayesNet& net) {
  EdgeReport report;
  for (const auto& e : net.edges()) {
    const Cpt& P = net.cpt(e.child);
    report.records.push_back({e.parent, e.child, parent_diameter(P, parent_position(P, net.name(e.parent)))});
  }
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const EdgeRecord& a, const EdgeRecord& b) { return a.delta > b.delta + kTieTolerance; });
  return report;
}

EdgeDeletion delete_edge(const BayesNet& net, VarId parent, VarId child) {
  if (parent >= net.size() || child >= net.size()) throw DomainError("delete_edge: unknown variable id");
  const Cpt& P = net.cpt(child);
  const auto& ps = P.parents();
  if (std::find(ps.begin(), ps.end(), net.name(parent)) == ps.end()) {
    throw DomainError("delete_edge: no edge " + net.name(parent) + " -> " + net.name(child));
  }
  const std::size_t j = parent_position(P, net.name(parent));
  const std::vector<std::size_t> to_zero(net.cardinality(parent), 0);
  Cpt merged = coarsen_parent(P, j, to_zero, {});
  const double cost = matched_row_cost(P, merged, j, to_zero);
  return {replace_tables(net, net.variables(), {{child, std::move(merged)}}), cost};
}

EdgeDeletion delete_edge(const BayesNet& net, const std::string& parent, const std::string& child) {
  return delete_edge(net, net.id(parent), net.id(child));
}

double matched_row_cost(const Cpt& original, const Cpt& merged, std::size_t parent_pos,
                        const std::vector<std::size_t>& level_map) {
  if (original.child_levels() != merged.child_levels()) throw DomainError("matched_row_cost: child levels differ");
  if (parent_pos >= original.parents().size()) throw DomainError("matched_row_cost: parent index out of range");
  if (level_map.size() != original.parent_levels()[parent_pos].size()) {
    throw DomainError("matched_row_cost: level map has the wrong length");
  }
  std::vector<std::size_t> new_cards;
  for (const auto& l : merged.parent_levels()) new_cards.push_back(l.size());
  Index expected = 1;
  for (auto c : new_cards) expected *= static_cast<Index>(c);
  if (merged.rows() != expected) throw DomainError("matched_row_cost: merged table has the wrong number of rows");

  double best = 0.0;
  for (Index r = 0; r < original.rows(); ++r) {
    const Index m = mapped_row(original, r, parent_pos, level_map, new_cards);
    best = std::max(best, tv_distance(original.row(r), merged.row(m)));
  }
  return best;
}

std::vector<AmalgamationCandidate> amalgamation_suggest(const BayesNet& net, VarId variable) {
  if (variable >= net.size()) throw DomainError("amalgamation_suggest: unknown variable id");
  const auto& levels = net.variable(variable).levels;
  std::vector<AmalgamationCandidate> out;
  for (std::size_t a = 0; a + 1 < levels.size(); ++a) {
    double cost = 0.0;
    for (VarId c : net.children(variable)) {
      const Cpt& P = net.cpt(c);
      const std::size_t j = parent_position(P, net.name(variable));
      const auto cards = P.parent_cardinalities();
      Index stride = 1;
      for (std::size_t k = j + 1; k < cards.size(); ++k) stride *= static_cast<Index>(cards[k]);
      for (Index r = 0; r < P.rows(); ++r) {
        if (P.config_of(r)[j] != a) continue;
        cost = std::max(cost, tv_distance(P.row(r), P.row(r + stride)));
      }
    }
    out.push_back({{a, a + 1}, {levels[a], levels[a + 1]}, cost});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AmalgamationCandidate& x, const AmalgamationCandidate& y) {
                     return x.cost < y.cost - kTieTolerance;
                   });
  return out;
}

Amalgamation amalgamate_levels(const BayesNet& net, VarId variable, const std::vector<std::size_t>& group,
                               const AmalgamationOptions& opts) {
  if (variable >= net.size()) throw DomainError("amalgamate_levels: unknown variable id");
  const auto& var = net.variable(variable);
  if (group.empty()) throw DomainError("amalgamate_levels: empty group");
  std::vector<std::size_t> sorted = group;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("amalgamate_levels: group lists a level twice");
  }
  if (sorted.back() >= var.levels.size()) throw DomainError("amalgamate_levels: level index out of range");
  if (!opts.allow_nonconsecutive && sorted.back() - sorted.front() + 1 != sorted.size()) {
    throw DomainError("amalgamate_levels: levels of '" + var.name +
                      "' to merge are not consecutive (allow non-consecutive groups for nominal variables)");
  }

  // New levels: the merged level takes the place of the first group member.
  std::vector<std::string> members;
  for (auto i : sorted) members.push_back(var.levels[i]);
  const std::string merged_label = opts.merged_name.value_or(detail::join(members, "+"));
  std::vector<std::size_t> level_map(var.levels.size());
  AmalgamationPlan plan;
  plan.variable = variable;
  for (std::size_t i = 0; i < var.levels.size(); ++i) {
    const bool in_group = std::binary_search(sorted.begin(), sorted.end(), i);
    if (in_group && i != sorted.front()) {
      level_map[i] = level_map[sorted.front()];
      continue;
    }
    level_map[i] = plan.merged_levels.size();
    plan.merged_levels.push_back(in_group && sorted.size() > 1 ? merged_label : var.levels[i]);
    plan.groups.push_back(in_group ? members : std::vector<std::string>{var.levels[i]});
  }

  std::vector<Variable> variables = net.variables();
  variables[variable].levels = plan.merged_levels;
  std::map<VarId, Cpt> replaced;

  // The variable's own table: merged columns are summed.
  {
    const Cpt& own = net.cpt(variable);
    Cpt::Table t = Cpt::Table::Zero(own.rows(), static_cast<Index>(plan.merged_levels.size()));
    for (std::size_t i = 0; i < level_map.size(); ++i)
      t.col(static_cast<Index>(level_map[i])) += own.table().col(static_cast<Index>(i));
    replaced.emplace(variable, Cpt(own.child(), plan.merged_levels, own.parents(), own.parent_levels(), std::move(t)));
  }
  for (VarId c : net.children(variable)) {
    const Cpt& P = net.cpt(c);
    const std::size_t j = parent_position(P, var.name);
    Cpt merged = coarsen_parent(P, j, level_map, plan.merged_levels);
    const double cost = matched_row_cost(P, merged, j, level_map);
    plan.costs.push_back({P.child(), cost});
    plan.cost = std::max(plan.cost, cost);
    replaced.emplace(c, std::move(merged));
  }
  return {replace_tables(net, std::move(variables), replaced), std::move(plan)};
}

Amalgamation amalgamate_levels(const BayesNet& net, const std::string& variable,
                               const std::vector<std::string>& group, const AmalgamationOptions& opts) {
  const VarId v = net.id(variable);
  const auto& levels = net.variable(v).levels;
  std::vector<std::size_t> idx;
  for (const auto& g : group) {
    auto it = std::find(levels.begin(), levels.end(), g);
    if (it == levels.end()) throw DomainError("'" + variable + "' has no level '" + g + "'");
    idx.push_back(static_cast<std::size_t>(it - levels.begin()));
  }
  return amalgamate_levels(net, v, idx, opts);
}

std::vector<Priority> elicitation_priority(const BayesNet& net, const VarSet& targets, const OracleOptions& opts) {
  if (targets.empty()) throw DomainError("elicitation_priority: empty target set");
  std::vector<Priority> out;
  for (VarId v = 0; v < net.size(); ++v) {
    VarSet reach = net.descendants(v);
    reach.insert(v);
    bool touches = false;
    for (VarId t : targets) touches = touches || reach.count(t);
    if (!touches) {
      out.push_back({v, 0.0, "no directed path from this table to the targets"});
      continue;
    }
    VarSet family{v};
    for (VarId p : net.parents(v)) family.insert(p);
    try {
      const auto report = impact_between(net, family, targets, ImpactMode::LemmaComposed, opts);
      std::string note = report.reduction.path.length() == 1 ? "shares a clique with the targets" : "";
      out.push_back({v, report.bound.value, std::move(note)});
    } catch (const DomainError& lemma_gap) {
      try {
        const auto report = impact_between(net, family, targets, ImpactMode::ExactDiameter, opts);
        out.push_back({v, report.bound.value, std::string("exact diameters used: ") + lemma_gap.what()});
      } catch (const std::exception& e) {
        out.push_back({v, 1.0, std::string("no bound available: ") + e.what()});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Priority& a, const Priority& b) { return a.score > b.score + kTieTolerance; });
  return out;
}

}  // namespace tvrobust
