#include "tvrobust/bn_model.hpp"

#include <algorithm>
#include <deque>

namespace tvrobust {

BayesNet::BayesNet(std::vector<Variable> variables, std::vector<Cpt> cpts)
    : variables_(std::move(variables)), cpts_(std::move(cpts)) {
  for (VarId v = 0; v < variables_.size(); ++v) index_.emplace(variables_[v].name, v);
  for (std::size_t c = 0; c < cpts_.size(); ++c) {
    if (auto v = find(cpts_[c].child())) cpt_of_.emplace(*v, c);  // first one wins
  }
}

std::optional<VarId> BayesNet::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId BayesNet::id(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw DomainError("unknown variable '" + std::string(name) + "'");
}

VarSet BayesNet::ids(const std::vector<std::string>& names) const {
  VarSet out;
  for (const auto& n : names) out.insert(id(n));
  return out;
}

std::vector<std::string> BayesNet::names(const VarSet& vars) const {
  std::vector<std::string> out;
  for (VarId v : vars) out.push_back(name(v));
  return out;
}

bool BayesNet::has_cpt(VarId v) const { return cpt_of_.count(v) != 0; }

const Cpt& BayesNet::cpt(VarId v) const {
  auto it = cpt_of_.find(v);
  if (it == cpt_of_.end()) throw DomainError("variable '" + name(v) + "' has no table");
  return cpts_[it->second];
}

std::vector<VarId> BayesNet::parents(VarId v) const {
  std::vector<VarId> out;
  if (!has_cpt(v)) return out;
  for (const auto& p : cpt(v).parents()) {
    if (auto id = find(p)) out.push_back(*id);
  }
  return out;
}

std::vector<VarId> BayesNet::children(VarId v) const {
  std::vector<VarId> out;
  for (VarId c = 0; c < size(); ++c) {
    const auto ps = parents(c);
    if (std::find(ps.begin(), ps.end(), v) != ps.end()) out.push_back(c);
  }
  return out;
}

std::vector<Edge> BayesNet::edges() const {
  std::vector<Edge> out;
  for (VarId c = 0; c < size(); ++c)
    for (VarId p : parents(c)) out.push_back({p, c});
  return out;
}

VarSet BayesNet::descendants(VarId v) const {
  VarSet seen;
  std::deque<VarId> queue{v};
  while (!queue.empty()) {
    const VarId u = queue.front();
    queue.pop_front();
    for (VarId c : children(u)) {
      if (seen.insert(c).second) queue.push_back(c);
    }
  }
  return seen;
}

namespace {

bool has_cycle(const BayesNet& net) {
  std::vector<std::size_t> indegree(net.size(), 0);
  for (const auto& e : net.edges()) ++indegree[e.child];
  std::deque<VarId> ready;
  for (VarId v = 0; v < net.size(); ++v)
    if (indegree[v] == 0) ready.push_back(v);
  std::size_t visited = 0;
  while (!ready.empty()) {
    const VarId u = ready.front();
    ready.pop_front();
    ++visited;
    for (VarId c : net.children(u))
      for (VarId p : net.parents(c))
        if (p == u && --indegree[c] == 0) ready.push_back(c);
  }
  return visited != net.size();
}

}  // namespace

std::vector<Violation> validate(const BayesNet& net) {
  std::vector<Violation> out;
  if (net.size() == 0) out.push_back({"non-empty", "network", "no variables declared"});

  std::set<std::string> seen_names;
  for (const auto& var : net.variables()) {
    if (!seen_names.insert(var.name).second) out.push_back({"unique-name", var.name, "variable declared twice"});
    if (var.levels.empty()) out.push_back({"levels", var.name, "variable has no levels"});
    std::set<std::string> seen_levels;
    for (const auto& l : var.levels) {
      if (!seen_levels.insert(l).second) out.push_back({"unique-level", var.name, "level '" + l + "' repeated"});
    }
  }

  std::map<std::string, int> table_count;
  for (const auto& cpt : net.cpts()) {
    ++table_count[cpt.child()];
    const auto child = net.find(cpt.child());
    if (!child) {
      out.push_back({"known-variable", cpt.child(), "table for undeclared variable"});
      continue;
    }
    if (cpt.child_levels() != net.variable(*child).levels) {
      out.push_back({"shape", cpt.child(), "table columns do not match the variable's levels"});
    }
    std::set<std::string> seen_parents;
    for (std::size_t j = 0; j < cpt.parents().size(); ++j) {
      const auto& pname = cpt.parents()[j];
      if (!seen_parents.insert(pname).second) {
        out.push_back({"parents", cpt.child(), "parent '" + pname + "' listed twice"});
      }
      if (pname == cpt.child()) out.push_back({"acyclic", cpt.child() + " -> " + cpt.child(), "self loop"});
      const auto pid = net.find(pname);
      if (!pid) {
        out.push_back({"known-variable", pname + " -> " + cpt.child(), "unknown parent '" + pname + "'"});
      } else if (j < cpt.parent_levels().size() && cpt.parent_levels()[j] != net.variable(*pid).levels) {
        out.push_back({"shape", pname + " -> " + cpt.child(), "parent levels in table do not match '" + pname + "'"});
      }
    }
    for (const auto& issue : cpt.inspect()) {
      switch (issue.kind) {
        case Cpt::IssueKind::Shape: out.push_back({"shape", cpt.child(), issue.detail}); break;
        case Cpt::IssueKind::Negative: out.push_back({"non-negative", cpt.child(), issue.detail}); break;
        case Cpt::IssueKind::RowSum: out.push_back({"row-sum", cpt.child(), issue.detail}); break;
      }
    }
  }
  for (const auto& var : net.variables()) {
    const int n = table_count[var.name];
    if (n == 0) out.push_back({"one-table", var.name, "variable has no table"});
    if (n > 1) out.push_back({"one-table", var.name, "variable has " + std::to_string(n) + " tables"});
  }
  if (has_cycle(net)) out.push_back({"acyclic", "network", "directed graph contains a cycle"});
  return out;
}

std::vector<VarId> topological_order(const BayesNet& net) {
  std::vector<std::size_t> indegree(net.size(), 0);
  std::vector<std::vector<VarId>> kids(net.size());
  for (const auto& e : net.edges()) {
    ++indegree[e.child];
    kids[e.parent].push_back(e.child);
  }
  std::set<VarId> ready;
  for (VarId v = 0; v < net.size(); ++v)
    if (indegree[v] == 0) ready.insert(v);
  std::vector<VarId> order;
  while (!ready.empty()) {
    const VarId u = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(u);
    for (VarId c : kids[u])
      if (--indegree[c] == 0) ready.insert(c);
  }
  if (order.size() != net.size()) throw DomainError("topological_order: the network has a directed cycle");
  return order;
}

VarSet ancestral_set(const BayesNet& net, const VarSet& targets) {
  VarSet out;
  std::deque<VarId> queue;
  for (VarId t : targets) {
    if (t >= net.size()) throw DomainError("ancestral_set: unknown variable id " + std::to_string(t));
    if (out.insert(t).second) queue.push_back(t);
  }
  while (!queue.empty()) {
    const VarId u = queue.front();
    queue.pop_front();
    for (VarId p : net.parents(u))
      if (out.insert(p).second) queue.push_back(p);
  }
  return out;
}

VarSet ancestral_set(const BayesNet& net, const std::vector<std::string>& targets) {
  return ancestral_set(net, net.ids(targets));
}

BayesNet induced_subnet(const BayesNet& net, const VarSet& keep) {
  std::vector<Variable> vars;
  std::vector<Cpt> cpts;
  for (VarId v : keep) {
    for (VarId p : net.parents(v)) {
      if (!keep.count(p)) {
        throw DomainError("induced_subnet: '" + net.name(v) + "' has parent '" + net.name(p) + "' outside the set");
      }
    }
    vars.push_back(net.variable(v));
    cpts.push_back(net.cpt(v));
  }
  return BayesNet(std::move(vars), std::move(cpts));
}

}  // namespace tvrobust
