#include "tvrobust/dot.hpp"

#include <cstdio>
#include <sstream>

namespace tvrobust {

namespace {

std::string id(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string three_places(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string set_label(const BayesNet& net, const VarSet& s) { return "{" + detail::join(net.names(s), ",") + "}"; }

}  // namespace

std::string emit_dot(const BayesNet& net, const EdgeReport& report) {
  const auto edges = net.edges();
  if (report.records.size() != edges.size()) {
    throw DomainError("emit_dot: report has " + std::to_string(report.records.size()) + " records for " +
                      std::to_string(edges.size()) + " edges");
  }
  std::ostringstream os;
  os << "digraph bn {\n";
  for (VarId v = 0; v < net.size(); ++v) os << "  " << id(net.name(v)) << ";\n";
  for (const auto& e : edges) {
    const EdgeRecord* rec = nullptr;
    for (const auto& r : report.records)
      if (r.parent == e.parent && r.child == e.child) rec = &r;
    if (!rec) {
      throw DomainError("emit_dot: no record for edge " + net.name(e.parent) + " -> " + net.name(e.child));
    }
    os << "  " << id(net.name(e.parent)) << " -> " << id(net.name(e.child)) << " [label=\""
       << three_places(rec->delta) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string emit_dot(const BayesNet& net, const JunctionTree& tree) {
  for (const auto& c : tree.cliques)
    for (VarId v : c)
      if (v >= net.size()) throw DomainError("emit_dot: clique refers to unknown variable id " + std::to_string(v));
  std::ostringstream os;
  os << "graph junction_tree {\n";
  for (std::size_t i = 0; i < tree.cliques.size(); ++i) {
    os << "  c" << i << " [label=" << id(set_label(net, tree.cliques[i])) << "];\n";
  }
  for (const auto& e : tree.edges) {
    os << "  c" << e.a << " -- c" << e.b << " [label=" << id(set_label(net, e.separator)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tvrobust
