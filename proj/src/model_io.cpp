#include "tvrobust/model_io.hpp"

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace tvrobust {

// Defined in the generated fixtures source.
const std::map<std::string, std::string, std::less<>>& bundled_fixture_table();

namespace {

using nlohmann::json;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ModelError(where, std::string("missing field \"") + key + "\"");
  return *it;
}

void only_fields(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) throw ModelError(where + "/" + it.key(), "unknown field");
  }
}

const json& expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ModelError(where, "expected an object");
  return j;
}

const json& expect_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ModelError(where, "expected an array");
  return j;
}

std::string expect_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ModelError(where, "expected a string");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  expect_array(j, where);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(expect_string(j[i], where + "/" + std::to_string(i)));
  return out;
}

double expect_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ModelError(where, "expected a number");
  return j.get<double>();
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string quoted_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + quoted(items[i]);
  return out + "]";
}

}  // namespace

std::string format_probability(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw DomainError("format_probability: cannot format value");
  return std::string(buf.data(), end);
}

BayesNet read_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ModelError(line_column(text, e.byte), what);
  }

  expect_object(doc, "");
  only_fields(doc, {"format_version", "variables", "cpts"}, "");
  const auto version = expect_string(field(doc, "format_version", ""), "/format_version");
  if (version != kFormatVersion) {
    throw ModelError("/format_version", "unsupported format version \"" + version + "\" (expected \"" +
                                            kFormatVersion + "\")");
  }

  const json& vars = expect_array(field(doc, "variables", ""), "/variables");
  if (vars.empty()) throw ModelError("/variables", "at least one variable is required");
  std::vector<Variable> variables;
  std::map<std::string, std::vector<std::string>> levels_of;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string where = "/variables/" + std::to_string(i);
    expect_object(vars[i], where);
    only_fields(vars[i], {"name", "levels"}, where);
    Variable v{expect_string(field(vars[i], "name", where), where + "/name"),
               string_list(field(vars[i], "levels", where), where + "/levels")};
    levels_of.emplace(v.name, v.levels);
    variables.push_back(std::move(v));
  }

  const json& tables = expect_array(field(doc, "cpts", ""), "/cpts");
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const std::string where = "/cpts/" + std::to_string(i);
    const json& t = expect_object(tables[i], where);
    only_fields(t, {"child", "parents", "rows"}, where);
    const std::string child = expect_string(field(t, "child", where), where + "/child");
    const auto parents = string_list(field(t, "parents", where), where + "/parents");
    const json& rows = expect_array(field(t, "rows", where), where + "/rows");

    auto child_it = levels_of.find(child);
    std::vector<std::string> child_levels = child_it == levels_of.end() ? std::vector<std::string>{} : child_it->second;
    std::vector<std::vector<std::string>> parent_levels;
    for (const auto& p : parents) {
      auto it = levels_of.find(p);
      parent_levels.push_back(it == levels_of.end() ? std::vector<std::string>{} : it->second);
    }

    std::size_t width = child_levels.size();
    if (child_it == levels_of.end() && !rows.empty() && rows[0].is_array()) width = rows[0].size();
    Cpt::Table table(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rw = where + "/rows/" + std::to_string(r);
      expect_array(rows[r], rw);
      if (rows[r].size() != width) {
        throw ModelError(rw, "row has " + std::to_string(rows[r].size()) + " entries, expected " +
                                 std::to_string(width) + " (one per level of \"" + child + "\")");
      }
      for (std::size_t c = 0; c < width; ++c) {
        table(static_cast<Index>(r), static_cast<Index>(c)) = expect_number(rows[r][c], rw + "/" + std::to_string(c));
      }
    }
    cpts.emplace_back(Cpt::Unchecked{}, child, std::move(child_levels), parents, std::move(parent_levels),
                      std::move(table));
  }
  return BayesNet(std::move(variables), std::move(cpts));
}

BayesNet parse_model(std::string_view text) {
  BayesNet net = read_model(text);
  const auto violations = validate(net);
  if (violations.empty()) return net;

  const Violation& v = violations.front();
  std::string location;
  for (std::size_t i = 0; i < net.cpts().size() && location.empty(); ++i) {
    const auto& c = net.cpts()[i];
    if (c.child() != v.subject && v.subject.find(" -> " + c.child()) == std::string::npos) continue;
    location = "/cpts/" + std::to_string(i);
    if (v.rule == "row-sum" || v.rule == "non-negative") {
      for (const auto& issue : c.inspect())
        if (issue.row >= 0) {
          location += "/rows/" + std::to_string(issue.row);
          break;
        }
    }
  }
  for (std::size_t i = 0; i < net.size() && location.empty(); ++i)
    if (net.name(i) == v.subject) location = "/variables/" + std::to_string(i);

  std::string message = v.rule + " violation for \"" + v.subject + "\": " + v.detail;
  if (violations.size() > 1) message += " (and " + std::to_string(violations.size() - 1) + " more)";
  throw ModelError(location, message);
}

std::string serialize_model(const BayesNet& net) {
  std::ostringstream os;
  os << "{\n  \"format_version\": " << quoted(kFormatVersion) << ",\n  \"variables\": [";
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& v = net.variable(i);
    os << (i ? ",\n" : "\n") << "    {\"name\": " << quoted(v.name) << ", \"levels\": " << quoted_list(v.levels) << "}";
  }
  os << (net.size() ? "\n  ],\n" : "],\n") << "  \"cpts\": [";
  const auto& cpts = net.cpts();
  for (std::size_t i = 0; i < cpts.size(); ++i) {
    const auto& c = cpts[i];
    os << (i ? ",\n" : "\n") << "    {\n      \"child\": " << quoted(c.child())
       << ",\n      \"parents\": " << quoted_list(c.parents()) << ",\n      \"rows\": [";
    for (Index r = 0; r < c.rows(); ++r) {
      os << (r ? ",\n" : "\n") << "        [";
      for (Index k = 0; k < c.cols(); ++k) os << (k ? ", " : "") << format_probability(c.table()(r, k));
      os << "]";
    }
    os << (c.rows() ? "\n      ]\n    }" : "]\n    }");
  }
  os << (cpts.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

std::vector<std::string> bundled_fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : bundled_fixture_table()) out.push_back(name);
  return out;
}

const std::string* bundled_fixture(std::string_view name) {
  const auto& table = bundled_fixture_table();
  auto it = table.find(name);
  return it == table.end() ? nullptr : &it->second;
}

std::string load_model_text(const std::string& source) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(source, ec)) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw ModelError(source, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  if (const auto* text = bundled_fixture(source)) return *text;
  throw ModelError(source, "no such file or bundled fixture");
}

}  // namespace tvrobust
