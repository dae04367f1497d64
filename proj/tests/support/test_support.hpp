#pragma once

// Shared fixtures, seeded generators and brute-force reference computations
// for the test binaries. The reference code here deliberately avoids the
// library's own enumeration routines.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tvrobust/advisors.hpp"
#include "tvrobust/model_io.hpp"

namespace tvtest {

using namespace tvrobust;

using Rng = std::mt19937_64;

// One generator per case so cases stay independent of each other.
inline Rng case_rng(std::uint64_t suite, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(suite >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline BayesNet bundled(const std::string& name) { return parse_model(*bundled_fixture(name)); }

inline Cpt table_from(const std::vector<std::vector<double>>& rows, std::vector<std::string> parents = {},
                      std::vector<std::vector<std::string>> parent_levels = {}) {
  Cpt::Table t(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) t(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  std::vector<std::string> levels;
  for (std::size_t c = 0; c < rows.front().size(); ++c) levels.push_back("y" + std::to_string(c));
  if (parents.empty() && rows.size() > 1) {
    parents = {"X"};
    parent_levels = {{}};
    for (std::size_t r = 0; r < rows.size(); ++r) parent_levels[0].push_back("x" + std::to_string(r));
  }
  return Cpt("Y", levels, parents, parent_levels, t);
}

// Tree condition given drought and rainfall, and an expert's alternative.
inline Cpt tree_P() {
  return table_from({{0.2, 0.6, 0.2}, {0.25, 0.6, 0.15}, {0.3, 0.6, 0.1},
                     {0.7, 0.25, 0.05}, {0.8, 0.18, 0.02}, {0.9, 0.09, 0.01}},
                    {"Drought", "Rainfall"}, {{"yes", "no"}, {"below average", "average", "above average"}});
}
inline Cpt tree_Q() {
  return table_from({{0.2, 0.6, 0.2}, {0.3, 0.5, 0.2}, {0.3, 0.6, 0.1},
                     {0.65, 0.25, 0.1}, {0.8, 0.18, 0.02}, {0.9, 0.1, 0.0}},
                    {"Drought", "Rainfall"}, {{"yes", "no"}, {"below average", "average", "above average"}});
}
inline ProbVec pi_1() { return ProbVec::unlabeled({0.05, 0.175, 0.025, 0.15, 0.525, 0.075}); }
inline ProbVec pi_2() { return ProbVec::unlabeled({0.05, 0.275, 0.03, 0.15, 0.4, 0.095}); }

// ---------------------------------------------------------------------------
// Generators.

// A strictly positive pmf (or one with random zeros when `sparse`).
inline Eigen::VectorXd random_pmf(Rng& rng, Index k, bool sparse = false) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::bernoulli_distribution zero(0.3);
  Eigen::VectorXd v(k);
  for (Index i = 0; i < k; ++i) v(i) = sparse && zero(rng) ? 0.0 : u(rng);
  if (v.sum() == 0.0) v(0) = 1.0;
  return v / v.sum();
}

inline ProbVec random_prob(Rng& rng, Index k, bool sparse = false) {
  return ProbVec::unlabeled(random_pmf(rng, k, sparse));
}

inline Cpt random_cpt(Rng& rng, std::size_t child_card, const std::vector<std::size_t>& parent_cards,
                      bool sparse = false) {
  std::vector<std::string> parents;
  std::vector<std::vector<std::string>> parent_levels;
  Index rows = 1;
  for (std::size_t j = 0; j < parent_cards.size(); ++j) {
    parents.push_back("P" + std::to_string(j));
    std::vector<std::string> lv;
    for (std::size_t l = 0; l < parent_cards[j]; ++l) lv.push_back(std::to_string(l));
    parent_levels.push_back(lv);
    rows *= static_cast<Index>(parent_cards[j]);
  }
  std::vector<std::string> levels;
  for (std::size_t l = 0; l < child_card; ++l) levels.push_back(std::to_string(l));
  Cpt::Table t(rows, static_cast<Index>(child_card));
  for (Index r = 0; r < rows; ++r) t.row(r) = random_pmf(rng, static_cast<Index>(child_card), sparse).transpose();
  return Cpt("C", levels, parents, parent_levels, t);
}

struct NetShape {
  std::size_t min_nodes = 5;
  std::size_t max_nodes = 7;
  std::size_t max_parents = 2;
  std::size_t max_card = 3;
  double edge_probability = 0.5;
};

// Random DAG over V0..Vn-1 with parents drawn from earlier variables and
// strictly positive tables.
inline BayesNet random_net(Rng& rng, const NetShape& shape = {}) {
  std::uniform_int_distribution<std::size_t> nodes(shape.min_nodes, shape.max_nodes);
  std::uniform_int_distribution<std::size_t> card(2, shape.max_card);
  std::bernoulli_distribution edge(shape.edge_probability);
  const std::size_t n = nodes(rng);
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < n; ++i) {
    Variable v{"V" + std::to_string(i), {}};
    const std::size_t k = card(rng);
    for (std::size_t l = 0; l < k; ++l) v.levels.push_back("s" + std::to_string(l));
    vars.push_back(v);
  }
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < i; ++j) candidates.push_back(j);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::vector<std::size_t> ps;
    for (auto j : candidates)
      if (ps.size() < shape.max_parents && edge(rng)) ps.push_back(j);
    std::sort(ps.begin(), ps.end());
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> levels;
    Index rows = 1;
    for (auto j : ps) {
      names.push_back(vars[j].name);
      levels.push_back(vars[j].levels);
      rows *= static_cast<Index>(vars[j].levels.size());
    }
    Cpt::Table t(rows, static_cast<Index>(vars[i].levels.size()));
    for (Index r = 0; r < rows; ++r) t.row(r) = random_pmf(rng, t.cols()).transpose();
    cpts.emplace_back(vars[i].name, vars[i].levels, names, levels, t);
  }
  return BayesNet(vars, cpts);
}

// The ten-node example network of the junction-tree discussion with random tables.
inline BayesNet fig5_random(Rng& rng) {
  const BayesNet shape = bundled("fig5");
  std::vector<Cpt> cpts;
  for (VarId v = 0; v < shape.size(); ++v) {
    const Cpt& old = shape.cpt(v);
    Cpt::Table t(old.rows(), old.cols());
    for (Index r = 0; r < t.rows(); ++r) t.row(r) = random_pmf(rng, t.cols()).transpose();
    cpts.emplace_back(old.child(), old.child_levels(), old.parents(), old.parent_levels(), t);
  }
  return BayesNet(shape.variables(), cpts);
}

// ---------------------------------------------------------------------------
// Brute-force references.

using Config = std::vector<std::size_t>;

// Joint distribution keyed by full configuration, built recursively.
inline std::map<Config, double> brute_joint(const BayesNet& net) {
  std::map<Config, double> out;
  Config cfg(net.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == net.size()) {
      double p = 1.0;
      for (VarId v = 0; v < net.size(); ++v) {
        const Cpt& P = net.cpt(v);
        std::vector<std::size_t> pc;
        for (VarId pa : net.parents(v)) pc.push_back(cfg[pa]);
        p *= P.table()(P.row_index(pc), static_cast<Index>(cfg[v]));
      }
      out[cfg] = p;
      return;
    }
    for (std::size_t l = 0; l < net.cardinality(k); ++l) {
      cfg[k] = l;
      rec(k + 1);
    }
  };
  rec(0);
  return out;
}

inline Config project(const Config& full, const std::vector<VarId>& vars) {
  Config c;
  for (VarId v : vars) c.push_back(full[v]);
  return c;
}

inline std::map<Config, double> brute_margin(const std::map<Config, double>& joint, const std::vector<VarId>& vars) {
  std::map<Config, double> out;
  for (const auto& [cfg, p] : joint) out[project(cfg, vars)] += p;
  return out;
}

// P(A = a | B = b) as a nested map b -> a -> probability, by slicing the joint.
inline std::map<Config, std::map<Config, double>> brute_conditional(const std::map<Config, double>& joint,
                                                                    const std::vector<VarId>& A,
                                                                    const std::vector<VarId>& B) {
  std::map<Config, std::map<Config, double>> out;
  std::map<Config, double> norm;
  for (const auto& [cfg, p] : joint) {
    out[project(cfg, B)][project(cfg, A)] += p;
    norm[project(cfg, B)] += p;
  }
  for (auto& [b, row] : out)
    for (auto& [a, p] : row) p /= norm[b];
  return out;
}

inline double brute_tv(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
  return 0.5 * s;
}

inline double brute_diameter(const std::vector<std::vector<double>>& rows) {
  double best = 0.0;
  for (const auto& a : rows)
    for (const auto& b : rows) best = std::max(best, brute_tv(a, b));
  return best;
}

inline std::vector<std::vector<double>> rows_of(const Cpt& P) {
  std::vector<std::vector<double>> out;
  for (Index r = 0; r < P.rows(); ++r) out.emplace_back(P.table().row(r).begin(), P.table().row(r).end());
  return out;
}

}  // namespace tvtest
