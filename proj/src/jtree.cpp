#include "tvrobust/jtree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <tuple>

namespace tvrobust {

namespace {

std::string set_text(const VarSet& s) {
  std::string out = "{";
  bool first = true;
  for (VarId v : s) {
    if (!first) out += ",";
    out += std::to_string(v);
    first = false;
  }
  return out + "}";
}

std::string names_text(const BayesNet& net, const VarSet& s) { return "{" + detail::join(net.names(s), ",") + "}"; }

VarSet intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool subset_of(const VarSet& a, const VarSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace

UGraph::UGraph(VarSet vertices) : vertices_(std::move(vertices)) {
  for (VarId v : vertices_) adj_[v];
}

void UGraph::add_edge(VarId a, VarId b) {
  if (a == b) throw DomainError("UGraph: self loop on vertex " + std::to_string(a));
  if (!vertices_.count(a) || !vertices_.count(b)) {
    throw DomainError("UGraph: edge (" + std::to_string(a) + "," + std::to_string(b) + ") has an unknown endpoint");
  }
  adj_[a].insert(b);
  adj_[b].insert(a);
}

bool UGraph::has_edge(VarId a, VarId b) const {
  auto it = adj_.find(a);
  return it != adj_.end() && it->second.count(b) != 0;
}

const VarSet& UGraph::neighbors(VarId v) const {
  auto it = adj_.find(v);
  if (it == adj_.end()) throw DomainError("UGraph: unknown vertex " + std::to_string(v));
  return it->second;
}

std::vector<std::pair<VarId, VarId>> UGraph::edges() const {
  std::vector<std::pair<VarId, VarId>> out;
  for (const auto& [v, ns] : adj_)
    for (VarId u : ns)
      if (v < u) out.emplace_back(v, u);
  return out;
}

std::size_t UGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& [v, ns] : adj_) twice += ns.size();
  return twice / 2;
}

UGraph moralize(const BayesNet& net) {
  VarSet all;
  for (VarId v = 0; v < net.size(); ++v) all.insert(v);
  return moralize(net, all);
}

UGraph moralize(const BayesNet& net, const VarSet& subset) {
  UGraph g(subset);
  for (VarId c : subset) {
    std::vector<VarId> ps;
    for (VarId p : net.parents(c))
      if (subset.count(p)) ps.push_back(p);
    for (VarId p : ps) g.add_edge(p, c);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j)
        if (ps[i] != ps[j]) g.add_edge(ps[i], ps[j]);
  }
  return g;
}

std::vector<std::pair<VarId, VarId>> fill_in_edges(const UGraph& g,
                                                   const std::optional<std::vector<VarId>>& order_hint) {
  std::map<VarId, std::size_t> rank;
  if (order_hint) {
    for (std::size_t i = 0; i < order_hint->size(); ++i) rank.emplace((*order_hint)[i], i);
  }
  auto rank_of = [&](VarId v) {
    auto it = rank.find(v);
    return it == rank.end() ? std::make_pair(std::size_t{1}, v) : std::make_pair(std::size_t{0}, it->second);
  };

  std::map<VarId, VarSet> adj;
  for (VarId v : g.vertices()) adj[v] = g.neighbors(v);
  VarSet remaining = g.vertices();
  std::vector<std::pair<VarId, VarId>> fill;

  auto fill_count = [&](VarId v) {
    std::size_t n = 0;
    const auto& ns = adj[v];
    for (auto a = ns.begin(); a != ns.end(); ++a)
      for (auto b = std::next(a); b != ns.end(); ++b)
        if (!adj[*a].count(*b)) ++n;
    return n;
  };

  while (!remaining.empty()) {
    VarId best = *remaining.begin();
    std::size_t best_fill = fill_count(best);
    for (VarId v : remaining) {
      const std::size_t f = fill_count(v);
      if (f < best_fill || (f == best_fill && rank_of(v) < rank_of(best))) {
        best = v;
        best_fill = f;
      }
    }
    const VarSet ns = adj[best];
    for (auto a = ns.begin(); a != ns.end(); ++a)
      for (auto b = std::next(a); b != ns.end(); ++b)
        if (!adj[*a].count(*b)) {
          adj[*a].insert(*b);
          adj[*b].insert(*a);
          fill.emplace_back(std::min(*a, *b), std::max(*a, *b));
        }
    for (VarId u : ns) adj[u].erase(best);
    adj.erase(best);
    remaining.erase(best);
  }
  return fill;
}

UGraph triangulate(const UGraph& g, const std::optional<std::vector<VarId>>& order_hint) {
  UGraph out = g;
  for (const auto& [a, b] : fill_in_edges(g, order_hint)) out.add_edge(a, b);
  return out;
}

std::vector<VarId> maximum_cardinality_search(const UGraph& g) {
  std::map<VarId, std::size_t> weight;
  for (VarId v : g.vertices()) weight[v] = 0;
  std::vector<VarId> order;
  while (!weight.empty()) {
    auto best = weight.begin();
    for (auto it = weight.begin(); it != weight.end(); ++it)
      if (it->second > best->second) best = it;
    const VarId v = best->first;
    weight.erase(best);
    order.push_back(v);
    for (VarId u : g.neighbors(v)) {
      auto it = weight.find(u);
      if (it != weight.end()) ++it->second;
    }
  }
  return order;
}

namespace {

// For each vertex in MCS order, the vertex plus its earlier-numbered
// neighbours. On a chordal graph these are complete.
std::vector<VarSet> mcs_candidates(const UGraph& g, const std::vector<VarId>& order) {
  std::map<VarId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<VarSet> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    VarSet c{order[i]};
    for (VarId u : g.neighbors(order[i]))
      if (pos[u] < i) c.insert(u);
    out.push_back(std::move(c));
  }
  return out;
}

bool is_complete(const UGraph& g, const VarSet& s) {
  for (auto a = s.begin(); a != s.end(); ++a)
    for (auto b = std::next(a); b != s.end(); ++b)
      if (!g.has_edge(*a, *b)) return false;
  return true;
}

}  // namespace

bool is_chordal(const UGraph& g) {
  // The reverse of an MCS order is a perfect elimination ordering iff the
  // graph is chordal.
  const auto order = maximum_cardinality_search(g);
  for (const auto& c : mcs_candidates(g, order))
    if (!is_complete(g, c)) return false;
  return true;
}

std::vector<std::size_t> JunctionTree::neighbors(std::size_t c) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges) {
    if (e.a == c) out.push_back(e.b);
    if (e.b == c) out.push_back(e.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::size_t> JunctionTree::find_clique(const VarSet& members) const {
  for (std::size_t i = 0; i < cliques.size(); ++i)
    if (cliques[i] == members) return i;
  return std::nullopt;
}

std::vector<std::size_t> JunctionTree::cliques_containing(const VarSet& s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cliques.size(); ++i)
    if (subset_of(s, cliques[i])) out.push_back(i);
  return out;
}

JunctionTree build_junction_tree(const UGraph& chordal) {
  if (!is_chordal(chordal)) throw DomainError("build_junction_tree: graph is not chordal");
  JunctionTree jt;
  const auto candidates = mcs_candidates(chordal, maximum_cardinality_search(chordal));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < candidates.size() && maximal; ++j) {
      if (j == i) continue;
      if (subset_of(candidates[i], candidates[j]) && (candidates[i] != candidates[j] || j < i)) maximal = false;
    }
    if (maximal) jt.cliques.push_back(candidates[i]);
  }

  const std::size_t n = jt.cliques.size();
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;  // (weight, i, j)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(intersect(jt.cliques[i], jt.cliques[j]).size(), i, j);
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });

  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& [w, i, j] : pairs) {
    const auto ri = find(i), rj = find(j);
    if (ri == rj) continue;
    root[ri] = rj;
    jt.edges.push_back({i, j, intersect(jt.cliques[i], jt.cliques[j])});
    if (jt.edges.size() + 1 == n) break;
  }

  if (n > 0) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const auto c = queue.front();
      queue.pop_front();
      jt.rip_order.push_back(c);
      for (auto d : jt.neighbors(c))
        if (!seen[d]) {
          seen[d] = true;
          queue.push_back(d);
        }
    }
  }
  return jt;
}

bool satisfies_running_intersection(const std::vector<VarSet>& cliques, const std::vector<std::size_t>& order) {
  if (order.size() != cliques.size()) return false;
  std::vector<bool> used(cliques.size(), false);
  VarSet so_far;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto i = order[k];
    if (i >= cliques.size() || used[i]) return false;
    used[i] = true;
    if (k > 0) {
      const VarSet sep = intersect(cliques[i], so_far);
      bool covered = false;
      for (std::size_t m = 0; m < k && !covered; ++m) covered = subset_of(sep, cliques[order[m]]);
      if (!covered) return false;
    }
    so_far.insert(cliques[i].begin(), cliques[i].end());
  }
  return true;
}

std::vector<std::string> check_junction_tree(const JunctionTree& jt, const UGraph* chordal) {
  std::vector<std::string> problems;
  const std::size_t n = jt.cliques.size();
  if (n > 0 && jt.edges.size() != n - 1) {
    problems.push_back("tree has " + std::to_string(jt.edges.size()) + " edges for " + std::to_string(n) + " cliques");
  }
  for (const auto& e : jt.edges) {
    if (e.a >= n || e.b >= n || e.a == e.b) {
      problems.push_back("edge refers to an invalid clique");
      return problems;
    }
    if (e.separator != intersect(jt.cliques[e.a], jt.cliques[e.b])) {
      problems.push_back("separator of edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                         ") is not the clique intersection");
    }
  }

  // Every variable must induce a connected subtree.
  VarSet all;
  for (const auto& c : jt.cliques) all.insert(c.begin(), c.end());
  for (VarId v : all) {
    std::vector<std::size_t> holders;
    for (std::size_t i = 0; i < n; ++i)
      if (jt.cliques[i].count(v)) holders.push_back(i);
    std::set<std::size_t> reached{holders.front()};
    std::deque<std::size_t> queue{holders.front()};
    while (!queue.empty()) {
      const auto c = queue.front();
      queue.pop_front();
      for (const auto& e : jt.edges) {
        std::size_t other = n;
        if (e.a == c) other = e.b;
        if (e.b == c) other = e.a;
        if (other < n && jt.cliques[other].count(v) && reached.insert(other).second) queue.push_back(other);
      }
    }
    if (reached.size() != holders.size()) {
      problems.push_back("cliques containing vertex " + std::to_string(v) + " are not connected");
    }
  }

  if (!jt.rip_order.empty() && !satisfies_running_intersection(jt.cliques, jt.rip_order)) {
    problems.push_back("clique order does not have the running intersection property");
  }

  if (chordal) {
    if (all != chordal->vertices()) problems.push_back("cliques do not cover the vertex set");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = jt.cliques[i];
      if (!is_complete(*chordal, c)) problems.push_back("clique " + set_text(c) + " is not complete");
      for (VarId u : chordal->vertices()) {
        if (c.count(u)) continue;
        bool joins_all = true;
        for (VarId w : c) joins_all = joins_all && chordal->has_edge(u, w);
        if (joins_all) {
          problems.push_back("clique " + set_text(c) + " is not maximal");
          break;
        }
      }
    }
    for (const auto& [a, b] : chordal->edges()) {
      if (jt.cliques_containing({a, b}).empty()) {
        problems.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) + ") lies in no clique");
      }
    }
  }
  return problems;
}

CliquePath simple_path(const JunctionTree& jt, std::size_t from, std::size_t to) {
  const std::size_t n = jt.cliques.size();
  if (from >= n || to >= n) throw DomainError("simple_path: clique index out of range");
  std::vector<std::size_t> prev(n, n);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const auto c = queue.front();
    queue.pop_front();
    for (auto d : jt.neighbors(c))
      if (!seen[d]) {
        seen[d] = true;
        prev[d] = c;
        queue.push_back(d);
      }
  }
  if (!seen[to]) throw DomainError("simple_path: cliques are not connected");

  CliquePath path;
  for (std::size_t c = to;; c = prev[c]) {
    path.clique_ids.push_back(c);
    if (c == from) break;
  }
  std::reverse(path.clique_ids.begin(), path.clique_ids.end());
  for (auto c : path.clique_ids) path.cliques.push_back(jt.cliques[c]);
  for (std::size_t i = 0; i + 1 < path.cliques.size(); ++i)
    path.separators.push_back(intersect(path.cliques[i], path.cliques[i + 1]));

  if (path.length() == 1) {
    path.donor = path.target = path.cliques.front();
  } else {
    std::set_difference(path.cliques.front().begin(), path.cliques.front().end(), path.separators.front().begin(),
                        path.separators.front().end(), std::inserter(path.donor, path.donor.end()));
    std::set_difference(path.cliques.back().begin(), path.cliques.back().end(), path.separators.back().begin(),
                        path.separators.back().end(), std::inserter(path.target, path.target.end()));
  }
  return path;
}

CliquePath simple_path(const JunctionTree& jt, const VarSet& from, const VarSet& to) {
  const auto a = jt.find_clique(from);
  const auto b = jt.find_clique(to);
  if (!a) throw DomainError("simple_path: " + set_text(from) + " is not a clique of the tree");
  if (!b) throw DomainError("simple_path: " + set_text(to) + " is not a clique of the tree");
  return simple_path(jt, *a, *b);
}

std::vector<std::pair<VarSet, VarSet>> path_links(const CliquePath& path) {
  std::vector<std::pair<VarSet, VarSet>> out;
  if (path.length() < 2) return out;
  out.emplace_back(path.donor, path.separators.front());
  for (std::size_t i = 0; i + 1 < path.separators.size(); ++i)
    out.emplace_back(path.separators[i], path.separators[i + 1]);
  out.emplace_back(path.separators.back(), path.target);
  return out;
}

Reduction donor_target_reduction(const BayesNet& net, const VarSet& donor, const VarSet& target,
                                 const ReductionOptions& opts) {
  if (donor.empty()) throw DomainError("donor_target_reduction: empty donor set");
  if (target.empty()) throw DomainError("donor_target_reduction: empty target set");
  VarSet ends = donor;
  ends.insert(target.begin(), target.end());

  Reduction red;
  red.ancestral = ancestral_set(net, ends);
  red.ancestral_net = induced_subnet(net, red.ancestral);

  UGraph moral = moralize(net, red.ancestral);
  if (opts.complete_endpoint_sets) {
    for (const VarSet* s : {&donor, &target})
      for (auto a = s->begin(); a != s->end(); ++a)
        for (auto b = std::next(a); b != s->end(); ++b)
          if (!moral.has_edge(*a, *b)) moral.add_edge(*a, *b);
  }
  red.triangulated = triangulate(moral);
  red.tree = build_junction_tree(red.triangulated);

  const auto from = red.tree.cliques_containing(donor);
  const auto to = red.tree.cliques_containing(target);
  if (from.empty()) {
    throw DomainError("donor set " + names_text(net, donor) + " is not contained in a single clique; split it");
  }
  if (to.empty()) {
    throw DomainError("target set " + names_text(net, target) + " is not contained in a single clique; split it");
  }

  bool have = false;
  for (auto i : from)
    for (auto j : to) {
      CliquePath p = simple_path(red.tree, i, j);
      if (!have || p.length() < red.path.length()) {
        red.path = std::move(p);
        have = true;
      }
    }
  red.path.donor = donor;
  red.path.target = target;
  for (const auto& c : red.path.cliques) red.kept.insert(c.begin(), c.end());
  return red;
}

Cpt linked_table(const BayesNet& net, const JointTable& joint, const VarSet& Y, const VarSet& X) {
  const std::vector<VarId> x_vars(X.begin(), X.end());
  const std::vector<VarId> y_vars(Y.begin(), Y.end());
  std::size_t n_rows = 1;
  for (VarId v : x_vars) n_rows *= net.cardinality(v);
  std::vector<std::vector<std::string>> parent_levels;
  for (VarId v : x_vars) parent_levels.push_back(net.variable(v).levels);

  if (Y.empty()) {
    Cpt::Table ones = Cpt::Table::Ones(static_cast<Index>(n_rows), 1);
    return Cpt("(none)", {"()"}, net.names(X), std::move(parent_levels), std::move(ones));
  }

  VarSet fresh;
  std::set_difference(Y.begin(), Y.end(), X.begin(), X.end(), std::inserter(fresh, fresh.end()));
  if (fresh.size() == Y.size()) return conditional_table(net, joint, Y, X);

  std::optional<Cpt> base;
  if (!fresh.empty()) base = conditional_table(net, joint, fresh, X);

  std::size_t n_cols = 1;
  for (VarId v : y_vars) n_cols *= net.cardinality(v);
  Cpt::Table table = Cpt::Table::Zero(static_cast<Index>(n_rows), static_cast<Index>(n_cols));

  std::vector<std::size_t> x_cfg(x_vars.size(), 0);
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::map<VarId, std::size_t> fixed;
    for (std::size_t k = 0; k < x_vars.size(); ++k) fixed[x_vars[k]] = x_cfg[k];
    // columns: every y configuration, consistent with x on the shared part
    std::vector<std::size_t> y_cfg(y_vars.size(), 0);
    for (std::size_t c = 0; c < n_cols; ++c) {
      bool consistent = true;
      std::size_t f_col = 0;
      for (std::size_t k = 0; k < y_vars.size(); ++k) {
        const VarId v = y_vars[k];
        if (X.count(v)) {
          consistent = consistent && fixed[v] == y_cfg[k];
        } else {
          f_col = f_col * net.cardinality(v) + y_cfg[k];
        }
      }
      if (consistent) {
        table(static_cast<Index>(r), static_cast<Index>(c)) =
            base ? base->table()(static_cast<Index>(r), static_cast<Index>(f_col)) : 1.0;
      }
      for (std::size_t k = y_vars.size(); k-- > 0;) {
        if (++y_cfg[k] < net.cardinality(y_vars[k])) break;
        y_cfg[k] = 0;
      }
    }
    for (std::size_t k = x_vars.size(); k-- > 0;) {
      if (++x_cfg[k] < net.cardinality(x_vars[k])) break;
      x_cfg[k] = 0;
    }
  }
  return Cpt(detail::join(net.names(Y), ","), product_labels(net, y_vars), net.names(X), std::move(parent_levels),
             std::move(table));
}

std::vector<Cpt> path_tables(const BayesNet& net, const CliquePath& path, const OracleOptions& opts) {
  std::vector<Cpt> out;
  const auto links = path_links(path);
  if (links.empty()) return out;

  // Enumerate only the ancestral closure of the path, then map ids back.
  VarSet involved = path.donor;
  involved.insert(path.target.begin(), path.target.end());
  for (const auto& s : path.separators) involved.insert(s.begin(), s.end());
  const VarSet anc = ancestral_set(net, involved);
  const BayesNet sub = induced_subnet(net, anc);
  const JointTable joint = joint_mass(sub, opts);
  auto remap = [&](const VarSet& s) {
    VarSet out_ids;
    for (VarId v : s) out_ids.insert(sub.id(net.name(v)));
    return out_ids;
  };
  for (const auto& [x, y] : links) out.push_back(linked_table(sub, joint, remap(y), remap(x)));
  return out;
}

}  // namespace tvrobust
