#include "tvrobust/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvrobust/advisors.hpp"
#include "tvrobust/dot.hpp"
#include "tvrobust/model_io.hpp"

namespace tvrobust {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string braces(const BayesNet& net, const VarSet& s) { return "{" + detail::join(net.names(s), ",") + "}"; }

Json names_json(const BayesNet& net, const VarSet& s) { return Json(net.names(s)); }

// Left-aligned columns separated by two spaces.
std::string table_text(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], r[i].size());
    }
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
    }
    line.erase(line.find_last_not_of(' ') + 1);
    os << line << "\n";
  }
  return os.str();
}

std::size_t parse_limit(const std::string& text, const char* origin) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(std::string(origin) + " must be a positive integer, got '" + text + "'");
  }
  std::size_t value = 0;
  try {
    value = std::stoull(text);
  } catch (const std::exception&) {
    throw UsageError(std::string(origin) + " is out of range: '" + text + "'");
  }
  if (value == 0) throw UsageError(std::string(origin) + " must be a positive integer, got '" + text + "'");
  return value;
}

struct Options {
  bool json = false;
  std::string limit;
  std::string model;
  std::string from, to;
  std::string mode = "exact";
  bool dot = false;
  std::string variable;
  std::string group;
  std::string merged_name;
  bool allow_nonconsecutive = false;
  std::string parent, child;
  std::string output;
};

// What a command produces: machine-readable results plus their rendering.
struct Outcome {
  Json results = Json::object();
  std::vector<std::string> warnings;
  std::string text;
  int code = kExitOk;
};

Json factor_json(const Factor& f) {
  return Json{{"table", f.table}, {"value", f.value}, {"provenance", f.provenance}};
}

Json bound_json(const BoundResult& b) {
  Json cert = Json::array();
  for (const auto& f : b.certificate) cert.push_back(factor_json(f));
  return Json{{"value", b.value}, {"mode", to_string(b.mode)}, {"certificate", cert}};
}

Json tree_json(const BayesNet& net, const JunctionTree& jt) {
  Json cliques = Json::array(), edges = Json::array();
  for (const auto& c : jt.cliques) cliques.push_back(names_json(net, c));
  for (const auto& e : jt.edges) edges.push_back(Json{{"a", e.a}, {"b", e.b}, {"separator", names_json(net, e.separator)}});
  return Json{{"cliques", cliques}, {"edges", edges}, {"rip_order", jt.rip_order}};
}

std::string tree_text(const BayesNet& net, const JunctionTree& jt) {
  std::ostringstream os;
  os << "cliques:\n";
  for (std::size_t i = 0; i < jt.cliques.size(); ++i) os << "  C" << i << "  " << braces(net, jt.cliques[i]) << "\n";
  os << "tree edges:\n";
  for (const auto& e : jt.edges) os << "  C" << e.a << " -- C" << e.b << "  " << braces(net, e.separator) << "\n";
  os << "running intersection order:";
  for (auto c : jt.rip_order) os << " C" << c;
  os << "\n";
  return os.str();
}

std::string path_text(const BayesNet& net, const CliquePath& p) {
  std::string out;
  for (std::size_t i = 0; i < p.cliques.size(); ++i) out += (i ? " -> " : "") + braces(net, p.cliques[i]);
  return out;
}

Json path_json(const BayesNet& net, const CliquePath& p) {
  Json cliques = Json::array(), seps = Json::array();
  for (const auto& c : p.cliques) cliques.push_back(names_json(net, c));
  for (const auto& s : p.separators) seps.push_back(names_json(net, s));
  return Json{{"donor", names_json(net, p.donor)},
              {"target", names_json(net, p.target)},
              {"cliques", cliques},
              {"separators", seps}};
}

BayesNet load(const Options& o) { return parse_model(load_model_text(o.model)); }

VarSet name_set(const BayesNet& net, const std::string& text, const char* flag) {
  const auto names = split_names(text);
  if (names.empty()) throw UsageError(std::string(flag) + " needs at least one variable name");
  return net.ids(names);
}

Outcome cmd_validate(const Options& o) {
  Outcome out;
  const BayesNet net = read_model(load_model_text(o.model));
  const auto violations = validate(net);
  Json list = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (const auto& v : violations) {
    list.push_back(Json{{"rule", v.rule}, {"subject", v.subject}, {"detail", v.detail}});
    rows.push_back({"  " + v.rule, v.subject, v.detail});
  }
  out.results = Json{{"valid", violations.empty()},
                     {"variables", net.size()},
                     {"tables", net.cpts().size()},
                     {"violations", list}};
  if (violations.empty()) {
    out.text = "valid: " + std::to_string(net.size()) + " variables, " + std::to_string(net.cpts().size()) +
               " tables\n";
  } else {
    out.text = "invalid: " + std::to_string(violations.size()) + " violation" +
               (violations.size() == 1 ? "" : "s") + "\n" + table_text(rows);
    out.code = kExitDomain;
  }
  return out;
}

Outcome cmd_diameters(const Options& o) {
  Outcome out;
  const BayesNet net = load(o);
  Json items = Json::array();
  std::vector<std::vector<std::string>> rows{{"variable", "parents", "diameter", "witness rows"}};
  for (VarId v = 0; v < net.size(); ++v) {
    const Cpt& P = net.cpt(v);
    const auto w = diameter_witness(P);
    const bool pair = P.rows() > 1;
    Json item{{"variable", net.name(v)}, {"parents", P.parents()}, {"diameter", w.value}};
    item["witness"] = pair ? Json{P.row_label(w.first), P.row_label(w.second)} : Json::array();
    items.push_back(item);
    rows.push_back({net.name(v), P.parents().empty() ? "-" : detail::join(P.parents(), ","), num(w.value),
                    pair ? P.row_label(w.first) + " | " + P.row_label(w.second) : "-"});
  }
  out.results = Json{{"diameters", items}};
  out.text = table_text(rows);
  return out;
}

Outcome cmd_edges(const Options& o) {
  Outcome out;
  const BayesNet net = load(o);
  const auto report = edge_deletion_report(net);
  Json items = Json::array();
  std::vector<std::vector<std::string>> rows{{"edge", "delta"}};
  for (const auto& r : report.records) {
    items.push_back(Json{{"parent", net.name(r.parent)}, {"child", net.name(r.child)}, {"delta", r.delta}});
    rows.push_back({net.name(r.parent) + " -> " + net.name(r.child), num(r.delta)});
  }
  out.results = Json{{"edges", items}};
  if (o.dot) {
    out.results["dot"] = emit_dot(net, report);
    out.text = emit_dot(net, report);
  } else {
    out.text = report.records.empty() ? "no edges\n" : table_text(rows);
  }
  return out;
}

Outcome cmd_impact(const Options& o, const OracleOptions& oracle) {
  Outcome out;
  const BayesNet net = load(o);
  const VarSet donor = name_set(net, o.from, "--from");
  const VarSet target = name_set(net, o.to, "--to");
  const auto report = impact_between(net, donor, target, parse_impact_mode(o.mode), oracle);
  const auto& p = report.reduction.path;
  out.results = Json{{"path", path_json(net, p)}, {"impact", bound_json(report.bound)}};

  std::ostringstream os;
  os << "donor: " << braces(net, donor) << "\n"
     << "target: " << braces(net, target) << "\n"
     << "path: " << path_text(net, p) << "\n"
     << "mode: " << to_string(report.bound.mode) << "\n"
     << "factors:\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : report.bound.certificate) rows.push_back({"  " + f.table, num(f.value), f.provenance});
  os << table_text(rows) << "impact: " << num(report.bound.value) << "\n";
  out.text = os.str();
  return out;
}

Outcome cmd_path(const Options& o) {
  Outcome out;
  const BayesNet net = load(o);
  if (o.from.empty() != o.to.empty()) throw UsageError("--from and --to must be given together");
  if (o.from.empty()) {
    const UGraph tri = triangulate(moralize(net));
    const JunctionTree jt = build_junction_tree(tri);
    out.results = Json{{"tree", tree_json(net, jt)}};
    out.text = o.dot ? emit_dot(net, jt) : tree_text(net, jt);
    if (o.dot) out.results["dot"] = out.text;
    return out;
  }
  const auto red = donor_target_reduction(net, name_set(net, o.from, "--from"), name_set(net, o.to, "--to"));
  out.results = Json{{"ancestral", names_json(net, red.ancestral)},
                     {"tree", tree_json(net, red.tree)},
                     {"path", path_json(net, red.path)},
                     {"kept", names_json(net, red.kept)}};
  if (o.dot) {
    out.text = emit_dot(net, red.tree);
    out.results["dot"] = out.text;
    return out;
  }
  std::ostringstream os;
  os << "ancestral set: " << braces(net, red.ancestral) << "\n" << tree_text(net, red.tree);
  os << "path: " << path_text(net, red.path) << "\n";
  os << "separators:";
  for (const auto& s : red.path.separators) os << " " << braces(net, s);
  os << "\n";
  out.text = os.str();
  return out;
}

void write_model(const BayesNet& net, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path + "'");
  f << serialize_model(net);
}

Outcome cmd_amalgamate(const Options& o) {
  Outcome out;
  const BayesNet net = load(o);
  const VarId v = net.id(o.variable);
  if (o.group.empty()) {
    Json items = Json::array();
    std::vector<std::vector<std::string>> rows{{"levels", "cost"}};
    for (const auto& c : amalgamation_suggest(net, v)) {
      items.push_back(Json{{"levels", c.labels}, {"cost", c.cost}});
      rows.push_back({detail::join(c.labels, " + "), num(c.cost)});
    }
    out.results = Json{{"variable", o.variable}, {"candidates", items}};
    out.text = items.empty() ? "no candidates: '" + o.variable + "' has a single level\n" : table_text(rows);
    return out;
  }
  AmalgamationOptions opts;
  opts.allow_nonconsecutive = o.allow_nonconsecutive;
  if (!o.merged_name.empty()) opts.merged_name = o.merged_name;
  const auto result = amalgamate_levels(net, o.variable, split_names(o.group), opts);
  const auto& plan = result.plan;
  Json costs = Json::array();
  std::vector<std::vector<std::string>> rows{{"table", "cost"}};
  for (const auto& c : plan.costs) {
    costs.push_back(Json{{"table", c.table}, {"cost", c.cost}});
    rows.push_back({"  " + c.table, num(c.cost)});
  }
  out.results = Json{{"variable", o.variable},
                     {"levels", plan.merged_levels},
                     {"groups", plan.groups},
                     {"costs", costs},
                     {"cost", plan.cost}};
  if (o.allow_nonconsecutive) out.warnings.push_back("consecutive-level check disabled");
  std::ostringstream os;
  os << "levels of " << o.variable << ": " << detail::join(plan.merged_levels, " | ") << "\n";
  os << (plan.costs.empty() ? std::string("no dependent tables\n") : table_text(rows));
  os << "cost: " << num(plan.cost) << "\n";
  if (!o.output.empty()) {
    write_model(result.net, o.output);
    os << "wrote " << o.output << "\n";
  }
  out.text = os.str();
  return out;
}

Outcome cmd_delete_edge(const Options& o) {
  Outcome out;
  const BayesNet net = load(o);
  const auto result = delete_edge(net, o.parent, o.child);
  const Cpt& merged = result.net.cpt(result.net.id(o.child));
  Json rows_json = Json::array();
  std::vector<std::vector<std::string>> rows;
  for (Index r = 0; r < merged.rows(); ++r) {
    std::vector<double> row(merged.table().row(r).begin(), merged.table().row(r).end());
    rows_json.push_back(Json{{"parents", merged.row_label(r)}, {"row", row}});
    std::string cells;
    for (double x : row) cells += (cells.empty() ? "" : " ") + num(x);
    rows.push_back({"  " + merged.row_label(r), cells});
  }
  out.results = Json{{"parent", o.parent}, {"child", o.child}, {"cost", result.cost}, {"rows", rows_json}};
  std::ostringstream os;
  os << "deleted " << o.parent << " -> " << o.child << "\n"
     << "new table for " << o.child << " (" << detail::join(merged.child_levels(), ", ") << "):\n"
     << table_text(rows) << "cost: " << num(result.cost) << "\n";
  if (!o.output.empty()) {
    write_model(result.net, o.output);
    os << "wrote " << o.output << "\n";
  }
  out.text = os.str();
  return out;
}

Outcome cmd_report(const Options& o, const OracleOptions& oracle) {
  Outcome out;
  Options sub = o;
  sub.dot = false;
  const Outcome d = cmd_diameters(sub);
  const Outcome e = cmd_edges(sub);
  const BayesNet net = load(o);

  Json amal = Json::array();
  std::vector<std::vector<std::string>> arows{{"variable", "levels", "cost"}};
  for (VarId v = 0; v < net.size(); ++v) {
    if (net.children(v).empty()) continue;
    for (const auto& c : amalgamation_suggest(net, v)) {
      amal.push_back(Json{{"variable", net.name(v)}, {"levels", c.labels}, {"cost", c.cost}});
      arows.push_back({net.name(v), detail::join(c.labels, " + "), num(c.cost)});
    }
  }
  out.results = Json{{"diameters", d.results["diameters"]}, {"edges", e.results["edges"]}, {"amalgamation", amal}};
  std::ostringstream os;
  os << "diameters\n" << d.text << "\nedge deletion\n" << e.text << "\namalgamation candidates\n"
     << (amal.empty() ? std::string("none\n") : table_text(arows));

  if (!o.to.empty()) {
    const VarSet targets = name_set(net, o.to, "--to");
    Json prio = Json::array();
    std::vector<std::vector<std::string>> prows{{"table", "score", "note"}};
    for (const auto& p : elicitation_priority(net, targets, oracle)) {
      prio.push_back(Json{{"variable", net.name(p.variable)}, {"score", p.score}, {"note", p.note}});
      prows.push_back({net.name(p.variable), num(p.score), p.note});
      if (p.note.rfind("no bound available", 0) == 0 || p.note.rfind("exact diameters used", 0) == 0) {
        out.warnings.push_back(net.name(p.variable) + ": " + p.note);
      }
    }
    out.results["priority"] = Json{{"targets", names_json(net, targets)}, {"ranking", prio}};
    os << "\nelicitation priority for " << braces(net, targets) << "\n" << table_text(prows);
  }
  out.text = os.str();
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Total variation robustness analysis for discrete Bayesian networks", "tvrobust"};
  app.require_subcommand(1, 1);
  Options o;
  app.add_flag("--json", o.json, "Print a JSON report instead of text");
  app.add_option("--limit", o.limit, "Largest joint state space the exact oracle may enumerate")->type_name("N");

  auto model_arg = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("model", o.model, "Model file, or the name of a bundled fixture")->required();
  };
  auto* validate_cmd = app.add_subcommand("validate", "Check a model against every structural and numerical rule");
  model_arg(validate_cmd);
  auto* diameters_cmd = app.add_subcommand("diameters", "Diameter of every table");
  model_arg(diameters_cmd);
  auto* edges_cmd = app.add_subcommand("edges", "Deletion cost of every edge");
  model_arg(edges_cmd);
  edges_cmd->add_flag("--dot", o.dot, "Emit an annotated Graphviz digraph");
  auto* impact_cmd = app.add_subcommand("impact", "Impact of a donor set on a target set");
  model_arg(impact_cmd);
  impact_cmd->add_option("--from", o.from, "Donor variables, comma separated")->required();
  impact_cmd->add_option("--to", o.to, "Target variables, comma separated")->required();
  impact_cmd->add_option("--mode", o.mode, "exact (oracle diameters) or bound (model tables only)")
      ->check(CLI::IsMember({"exact", "bound", "exact-diameter", "lemma-composed"}));
  auto* path_cmd = app.add_subcommand("path", "Junction tree, or the clique path between two variable sets");
  model_arg(path_cmd);
  path_cmd->add_option("--from", o.from, "Donor variables, comma separated");
  path_cmd->add_option("--to", o.to, "Target variables, comma separated");
  path_cmd->add_flag("--dot", o.dot, "Emit the junction tree as a Graphviz graph");
  auto* amal_cmd = app.add_subcommand("amalgamate", "Suggest or perform a merge of adjacent levels");
  model_arg(amal_cmd);
  amal_cmd->add_option("--variable", o.variable, "Variable whose levels are merged")->required();
  amal_cmd->add_option("--group", o.group, "Levels to merge, comma separated; omit to list candidates");
  amal_cmd->add_option("--name", o.merged_name, "Label of the merged level");
  amal_cmd->add_flag("--allow-nonconsecutive", o.allow_nonconsecutive, "Permit merging levels that are not adjacent");
  amal_cmd->add_option("--output", o.output, "Write the amalgamated model here");
  auto* del_cmd = app.add_subcommand("delete-edge", "Remove an edge by averaging the child's rows");
  model_arg(del_cmd);
  del_cmd->add_option("--parent", o.parent, "Parent variable")->required();
  del_cmd->add_option("--child", o.child, "Child variable")->required();
  del_cmd->add_option("--output", o.output, "Write the reduced model here");
  auto* report_cmd = app.add_subcommand("report", "Diameters, edge costs, amalgamation candidates and priorities");
  model_arg(report_cmd);
  report_cmd->add_option("--to", o.to, "Targets for elicitation priorities, comma separated");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    OracleOptions oracle;
    if (!o.limit.empty()) {
      oracle.state_limit = parse_limit(o.limit, "--limit");
    } else if (const char* env = std::getenv("TVROBUST_LIMIT"); env && *env) {
      oracle.state_limit = parse_limit(env, "TVROBUST_LIMIT");
    }

    Outcome result;
    if (command == "validate") result = cmd_validate(o);
    else if (command == "diameters") result = cmd_diameters(o);
    else if (command == "edges") result = cmd_edges(o);
    else if (command == "impact") result = cmd_impact(o, oracle);
    else if (command == "path") result = cmd_path(o);
    else if (command == "amalgamate") result = cmd_amalgamate(o);
    else if (command == "delete-edge") result = cmd_delete_edge(o);
    else result = cmd_report(o, oracle);

    if (o.json) {
      Json doc{{"command", command}, {"arguments", args}, {"model", o.model}, {"results", result.results},
               {"warnings", result.warnings}};
      out << doc.dump(2) << "\n";
    } else {
      out << result.text;
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
    }
    return result.code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ModelError& e) {
    if (e.location() == o.model) {
      err << "error: " << e.what() << "\n";
    } else {
      err << "error: " << o.model << ": " << e.what() << "\n";
    }
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace tvrobust
