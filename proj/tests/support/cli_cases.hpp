#pragma once

// Command lines with checked-in transcripts, shared by the CLI tests and the
// acceptance binary.

#include <sstream>
#include <string>
#include <vector>

#include "tvrobust/cli.hpp"

namespace tvtest {

struct Run {
  int code;
  std::string out;
  std::string err;
};

inline Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = tvrobust::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::string transcript(const Run& r) {
  return "exit: " + std::to_string(r.code) + "\n--- stdout\n" + r.out + "--- stderr\n" + r.err;
}

struct Golden {
  const char* name;
  std::vector<std::string> args;
};

inline const std::vector<Golden>& goldens() {
  static const std::vector<Golden> cases{
      {"validate_fragment", {"validate", "native_fish_fragment"}},
      {"validate_broken", {"validate", "broken_model"}},
      {"validate_broken_json", {"--json", "validate", "broken_model"}},
      {"diameters_fragment", {"diameters", "native_fish_fragment"}},
      {"diameters_fragment_json", {"--json", "diameters", "native_fish_fragment"}},
      {"diameters_fragment_q_json", {"--json", "diameters", "native_fish_fragment_q"}},
      {"diameters_printed_json", {"--json", "diameters", "native_fish_amalgamated_printed"}},
      {"diameters_fig5_json", {"--json", "diameters", "fig5"}},
      {"edges_fig5_json", {"--json", "edges", "fig5"}},
      {"path_fig5_json", {"--json", "path", "fig5", "--from", "X1", "--to", "X9"}},
      {"validate_fig5_json", {"--json", "validate", "fig5"}},
      {"edges_fragment", {"edges", "native_fish_fragment"}},
      {"edges_fig5_dot", {"edges", "fig5", "--dot"}},
      {"impact_fig5_exact", {"impact", "fig5", "--from", "X1", "--to", "X9"}},
      {"impact_fig5_bound", {"impact", "fig5", "--from", "X1", "--to", "X9", "--mode", "bound"}},
      {"impact_fig5_json", {"--json", "impact", "fig5", "--from", "X1,X2", "--to", "X6,X7", "--mode", "bound"}},
      {"path_fig5_tree", {"path", "fig5"}},
      {"path_fig5_dot", {"path", "fig5", "--dot"}},
      {"path_fig5_x1_x9", {"path", "fig5", "--from", "X1", "--to", "X9"}},
      {"amalgamate_rainfall_suggest", {"amalgamate", "native_fish_fragment", "--variable", "Rainfall"}},
      {"amalgamate_rainfall_merge",
       {"amalgamate", "native_fish_fragment", "--variable", "Rainfall", "--group", "below average,average", "--name",
        "average or below"}},
      {"delete_edge_rainfall", {"delete-edge", "native_fish_fragment", "--parent", "Rainfall", "--child", "TreeCondition"}},
      {"report_fig5", {"report", "fig5", "--to", "X9"}},
      {"report_fragment_json", {"--json", "report", "native_fish_fragment", "--to", "TreeCondition"}},
  };
  return cases;
}

}  // namespace tvtest
