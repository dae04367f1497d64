#include "tvrobust/bounds.hpp"

#include <sstream>

namespace tvrobust {

namespace {

std::string table_name(const BayesNet& net, const VarSet& Y, const VarSet& X) {
  std::string s = "P(" + (Y.empty() ? std::string("-") : detail::join(net.names(Y), ","));
  if (!X.empty()) s += " | " + detail::join(net.names(X), ",");
  return s + ")";
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(ImpactMode mode) {
  return mode == ImpactMode::ExactDiameter ? "exact-diameter" : "lemma-composed";
}

ImpactMode parse_impact_mode(const std::string& text) {
  if (text == "exact" || text == "exact-diameter") return ImpactMode::ExactDiameter;
  if (text == "bound" || text == "lemma" || text == "lemma-composed") return ImpactMode::LemmaComposed;
  throw DomainError("unknown impact mode '" + text + "' (expected exact or bound)");
}

Factor lemma_link_bound(const BayesNet& net, const VarSet& X, const VarSet& Y) {
  Factor f;
  f.table = table_name(net, Y, X);
  if (Y.empty()) {
    f.value = 0.0;
    f.provenance = "nothing conditioned: constant table";
    return f;
  }
  std::size_t rows = 1;
  for (VarId v : X) rows *= net.cardinality(v);
  if (rows <= 1) {
    f.value = 0.0;
    f.provenance = "single conditioning configuration";
    return f;
  }
  for (VarId y : Y) {
    if (X.count(y) && net.cardinality(y) > 1) {
      f.value = 1.0;
      f.provenance = "'" + net.name(y) + "' is copied from the conditioning set: trivial bound";
      return f;
    }
  }

  std::vector<VarId> members;
  for (VarId v : topological_order(net))
    if (Y.count(v) && !X.count(v)) members.push_back(v);

  VarSet given = X;
  double sum = 0.0;
  std::vector<std::string> parts;
  for (VarId y : members) {
    if (net.cardinality(y) > 1) {
      const VarSet desc = net.descendants(y);
      for (VarId z : given) {
        if (desc.count(z)) {
          throw DomainError("no lemma bound for " + f.table + ": conditioning variable '" + net.name(z) +
                            "' is a descendant of '" + net.name(y) + "'");
        }
      }
      // Every row of P(y | given) mixes rows of y's own table.
      const double d = diameter(net.cpt(y));
      sum += d;
      parts.push_back("d+(" + net.name(y) + ")=" + fmt(d));
    }
    given.insert(y);
  }

  f.value = std::min(1.0, sum);
  if (parts.empty()) {
    f.provenance = "single-level variables only";
  } else if (parts.size() == 1) {
    f.provenance = "mixture of rows of the elicited table: " + parts.front();
  } else {
    f.provenance = "chain sum, clamped to 1: " + detail::join(parts, " + ");
  }
  return f;
}

BoundResult path_impact(const BayesNet& net, const CliquePath& path, ImpactMode mode, const OracleOptions& opts) {
  BoundResult r;
  r.mode = mode;
  const auto links = path_links(path);
  if (links.empty()) {
    r.value = 1.0;
    r.certificate.push_back({table_name(net, path.target, path.donor), 1.0, "single clique: no attenuation"});
    return r;
  }

  double product = 1.0;
  if (mode == ImpactMode::ExactDiameter) {
    const auto tables = path_tables(net, path, opts);
    for (std::size_t i = 0; i < links.size(); ++i) {
      const double d = diameter(tables[i]);
      r.certificate.push_back({table_name(net, links[i].second, links[i].first), d, "exact diameter of the oracle table"});
      product *= d;
    }
  } else {
    for (const auto& [x, y] : links) {
      r.certificate.push_back(lemma_link_bound(net, x, y));
      product *= r.certificate.back().value;
    }
  }
  r.value = std::min(1.0, product);
  return r;
}

ImpactReport impact_between(const BayesNet& net, const VarSet& donor, const VarSet& target, ImpactMode mode,
                            const OracleOptions& opts, const ReductionOptions& ropts) {
  ImpactReport out{donor_target_reduction(net, donor, target, ropts), {}};
  out.bound = path_impact(net, out.reduction.path, mode, opts);
  return out;
}

}  // namespace tvrobust
