#include <doctest.h>

#include "support/test_support.hpp"

using namespace tvtest;
using doctest::Approx;

namespace {

constexpr double kSlack = 1e-9;

VarSet named(const BayesNet& net, std::initializer_list<const char*> names) {
  VarSet s;
  for (const char* n : names) s.insert(net.id(n));
  return s;
}

}  // namespace

TEST_CASE("edge report for the fragment") {
  const BayesNet net = bundled("native_fish_fragment");
  const auto report = edge_deletion_report(net);
  REQUIRE(report.records.size() == 2);
  CHECK(net.name(report.records[0].parent) == "Drought");
  CHECK(report.records[0].delta == Approx(0.6).epsilon(1e-12));
  CHECK(net.name(report.records[1].parent) == "Rainfall");
  CHECK(report.records[1].delta == Approx(0.2).epsilon(1e-12));
}

TEST_CASE("edge report covers every edge of the ten-node example") {
  const BayesNet net = bundled("fig5");
  const auto report = edge_deletion_report(net);
  CHECK(report.records.size() == 11);
  for (std::size_t i = 1; i < report.records.size(); ++i)
    CHECK(report.records[i - 1].delta >= report.records[i].delta - kTieTolerance);
}

TEST_CASE("deleting the rainfall edge averages across rainfall") {
  const BayesNet net = bundled("native_fish_fragment");
  const auto del = delete_edge(net, "Rainfall", "TreeCondition");
  CHECK(validate(del.net).empty());
  const Cpt& P = del.net.cpt(del.net.id("TreeCondition"));
  CHECK(P.parents() == std::vector<std::string>{"Drought"});
  CHECK(P.table()(0, 0) == Approx(0.25).epsilon(1e-12));
  CHECK(P.table()(0, 1) == Approx(0.6).epsilon(1e-12));
  CHECK(P.table()(0, 2) == Approx(0.15).epsilon(1e-12));
  CHECK(del.cost == Approx(0.1).epsilon(1e-12));
  CHECK(del.net.edges().size() == 1);

  CHECK_THROWS_AS(delete_edge(net, "TreeCondition", "Drought"), DomainError);
  CHECK_THROWS_AS(delete_edge(net, "Nope", "TreeCondition"), DomainError);
}

TEST_CASE("amalgamation suggestions for rainfall tie at 0.1") {
  const BayesNet net = bundled("native_fish_fragment");
  const auto s = amalgamation_suggest(net, net.id("Rainfall"));
  REQUIRE(s.size() == 2);
  CHECK(s[0].cost == Approx(0.1).epsilon(1e-12));
  CHECK(s[1].cost == Approx(0.1).epsilon(1e-12));
  CHECK(s[0].labels == std::vector<std::string>{"below average", "average"});
  CHECK(s[1].labels == std::vector<std::string>{"average", "above average"});
  CHECK(amalgamation_suggest(net, net.id("TreeCondition")).front().cost == 0.0);
}

TEST_CASE("merging the two lower rainfall levels") {
  const BayesNet net = bundled("native_fish_fragment");
  AmalgamationOptions opts;
  opts.merged_name = "average or below";
  const auto a = amalgamate_levels(net, "Rainfall", {"below average", "average"}, opts);
  CHECK(validate(a.net).empty());
  CHECK(a.plan.merged_levels == std::vector<std::string>{"average or below", "above average"});
  REQUIRE(a.plan.costs.size() == 1);
  CHECK(a.plan.costs[0].table == "TreeCondition");
  CHECK(a.plan.cost == Approx(0.05).epsilon(1e-12));

  const Cpt& merged = a.net.cpt(a.net.id("TreeCondition"));
  CHECK(merged.table()(2, 0) == Approx(0.75).epsilon(1e-12));
  CHECK(merged.table()(2, 1) == Approx(0.215).epsilon(1e-12));
  CHECK(merged.table()(2, 2) == Approx(0.035).epsilon(1e-12));

  const Cpt& rain = a.net.cpt(a.net.id("Rainfall"));
  const Cpt& old_rain = net.cpt(net.id("Rainfall"));
  CHECK(rain.table()(0, 0) == Approx(old_rain.table()(0, 0) + old_rain.table()(0, 1)).epsilon(1e-12));

  const auto plain = amalgamate_levels(net, "Rainfall", {"below average", "average"});
  CHECK(plain.plan.merged_levels.front() == "below average+average");
}

TEST_CASE("the printed merged table differs from the simple average") {
  const BayesNet net = bundled("native_fish_fragment");
  const BayesNet printed = bundled("native_fish_amalgamated_printed");
  const Cpt& P = net.cpt(net.id("TreeCondition"));
  const Cpt& Pp = printed.cpt(printed.id("TreeCondition"));
  CHECK(matched_row_cost(P, Pp, 1, {0, 0, 1}) == Approx(0.075).epsilon(1e-12));

  const auto avg = amalgamate_levels(net, "Rainfall", {"below average", "average"});
  CHECK(matched_row_cost(P, avg.net.cpt(avg.net.id("TreeCondition")), 1, {0, 0, 1}) == Approx(0.05).epsilon(1e-12));
  CHECK(std::abs(Pp.table()(2, 0) - avg.net.cpt(avg.net.id("TreeCondition")).table()(2, 0)) > 0.01);

  CHECK_THROWS_AS(matched_row_cost(P, Pp, 1, {0, 1}), DomainError);
  CHECK_THROWS_AS(matched_row_cost(P, Pp, 0, {0, 0, 1}), DomainError);
}

TEST_CASE("amalgamation rejects bad groups") {
  const BayesNet net = bundled("native_fish_fragment");
  const VarId rain = net.id("Rainfall");
  CHECK_THROWS_WITH_AS(amalgamate_levels(net, rain, {0, 2}), doctest::Contains("consecutive"), DomainError);
  AmalgamationOptions nominal;
  nominal.allow_nonconsecutive = true;
  CHECK_NOTHROW(amalgamate_levels(net, rain, {0, 2}, nominal));
  CHECK_THROWS_AS(amalgamate_levels(net, rain, {}), DomainError);
  CHECK_THROWS_AS(amalgamate_levels(net, rain, {1, 1}), DomainError);
  CHECK_THROWS_AS(amalgamate_levels(net, rain, {2, 3}), DomainError);
  CHECK_THROWS_AS(amalgamate_levels(net, "Rainfall", {"drizzle"}), DomainError);
}

TEST_CASE("elicitation priority for X9") {
  const BayesNet net = bundled("fig5");
  const auto ranking = elicitation_priority(net, named(net, {"X9"}));
  REQUIRE(ranking.size() == 10);
  std::map<std::string, Priority> by_name;
  for (const auto& p : ranking) by_name.emplace(net.name(p.variable), p);

  CHECK(net.name(ranking.front().variable) == "X9");
  CHECK(by_name.at("X9").score == 1.0);
  CHECK(by_name.at("X7").score >= by_name.at("X5").score - kSlack);
  for (const char* off : {"X6", "X8", "X10"}) {
    CHECK(by_name.at(off).score == 0.0);
    CHECK(by_name.at(off).note.find("no directed path") != std::string::npos);
  }
  // The root table's score is the whole product, below every intermediate score.
  for (const char* mid : {"X2", "X4", "X5", "X7"}) CHECK(by_name.at("X1").score <= by_name.at(mid).score + kSlack);
  for (std::size_t i = 1; i < ranking.size(); ++i) CHECK(ranking[i - 1].score >= ranking[i].score - kTieTolerance);

  CHECK_THROWS_AS(elicitation_priority(net, VarSet{}), DomainError);
}

TEST_CASE("property: merging never widens an affected table") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = case_rng(61, i);
    NetShape shape;
    shape.max_card = 4;
    const BayesNet net = random_net(rng, shape);
    for (VarId v = 0; v < net.size(); ++v) {
      if (net.children(v).empty()) continue;
      const std::size_t k = net.cardinality(v);
      std::vector<std::size_t> group{0, 1};
      if (k > 2 && i % 2 == 0) group.push_back(2);
      const auto a = amalgamate_levels(net, v, group);
      CHECK(validate(a.net).empty());
      for (VarId c : net.children(v)) CHECK(diameter(a.net.cpt(c)) <= diameter(net.cpt(c)) + kSlack);

      std::vector<std::size_t> all(k);
      for (std::size_t l = 0; l < k; ++l) all[l] = l;
      const auto everything = amalgamate_levels(net, v, all);
      for (VarId c : net.children(v)) {
        const Cpt& P = net.cpt(c);
        std::size_t j = 0;
        while (P.parents()[j] != net.name(v)) ++j;
        CHECK(parent_diameter(everything.net.cpt(c), j) == 0.0);
      }
    }
  }
}

TEST_CASE("property: an edge costs nothing to delete exactly when its parent has no effect") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = case_rng(62, i);
    const BayesNet net = random_net(rng);
    for (const auto& rec : edge_deletion_report(net).records) {
      const auto del = delete_edge(net, rec.parent, rec.child);
      CHECK(validate(del.net).empty());
      CHECK(del.cost <= rec.delta + kSlack);
      CHECK(rec.delta <= 2 * del.cost + kSlack);
    }
    // A child that ignores one parent: copy rows across that parent's levels.
    for (VarId c = 0; c < net.size(); ++c) {
      const Cpt& P = net.cpt(c);
      if (P.parents().empty()) continue;
      Cpt::Table t = P.table();
      for (Index r = 0; r < P.rows(); ++r) {
        auto cfg = P.config_of(r);
        cfg[0] = 0;
        t.row(r) = P.table().row(P.row_index(cfg));
      }
      const Cpt flat(P.child(), P.child_levels(), P.parents(), P.parent_levels(), t);
      CHECK(parent_diameter(flat, 0) == 0.0);
      std::vector<Cpt> cpts;
      for (VarId v = 0; v < net.size(); ++v) cpts.push_back(v == c ? flat : net.cpt(v));
      const BayesNet flat_net(net.variables(), cpts);
      CHECK(delete_edge(flat_net, net.id(P.parents()[0]), c).cost <= 1e-15);
    }
  }
}
