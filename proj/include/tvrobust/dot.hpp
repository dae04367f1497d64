#pragma once

// Graphviz output.

#include <string>

#include "tvrobust/advisors.hpp"
#include "tvrobust/jtree.hpp"

namespace tvrobust {

// The network as a digraph with every edge labelled by its deletion cost
// (three decimals). Nodes follow declaration order and edges follow
// BayesNet::edges(), so output is deterministic.
std::string emit_dot(const BayesNet& net, const EdgeReport& report);

// Cliques as nodes and tree edges labelled by their separators. Junction
// trees are undirected, so this is a `graph` rather than a `digraph`.
std::string emit_dot(const BayesNet& net, const JunctionTree& tree);

}  // namespace tvrobust
