#include <doctest.h>

#include <algorithm>

#include "support/test_support.hpp"

using namespace tvtest;

namespace {

bool has_rule(const std::vector<Violation>& vs, const std::string& rule, const std::string& subject) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Violation& v) { return v.rule == rule && v.subject == subject; });
}

BayesNet two_node(const std::vector<std::vector<double>>& rows) {
  return BayesNet({{"A", {"a0", "a1"}}, {"B", {"b0", "b1"}}},
                  {Cpt("A", {"a0", "a1"}, {}, {}, Cpt::Table::Constant(1, 2, 0.5)),
                   Cpt(Cpt::Unchecked{}, "B", {"b0", "b1"}, {"A"}, {{"a0", "a1"}},
                       [&] {
                         Cpt::Table t(static_cast<Index>(rows.size()), 2);
                         for (std::size_t r = 0; r < rows.size(); ++r) t.row(static_cast<Index>(r)) << rows[r][0], rows[r][1];
                         return t;
                       }())});
}

}  // namespace

TEST_CASE("the fragment network validates and exposes its structure") {
  const BayesNet net = bundled("native_fish_fragment");
  CHECK(validate(net).empty());
  CHECK(net.size() == 3);
  CHECK(net.id("TreeCondition") == 2);
  CHECK(net.parents(2) == std::vector<VarId>{0, 1});
  CHECK(net.children(0) == std::vector<VarId>{2});
  CHECK(net.edges().size() == 2);
  CHECK(net.descendants(0) == VarSet{2});
  CHECK_THROWS_AS(net.id("Nope"), DomainError);
  CHECK_FALSE(net.find("Nope").has_value());
}

TEST_CASE("validation reports every broken rule") {
  const BayesNet broken = read_model(*bundled_fixture("broken_model"));
  const auto vs = validate(broken);
  CHECK(has_rule(vs, "row-sum", "B"));
  CHECK(has_rule(vs, "known-variable", "Z -> C"));
  CHECK(has_rule(vs, "acyclic", "network"));

  CHECK(has_rule(validate(two_node({{0.5, 0.5}, {-0.1, 1.1}})), "non-negative", "B"));
  CHECK(has_rule(validate(two_node({{0.5, 0.5}})), "shape", "B"));
  CHECK(validate(two_node({{0.5, 0.5}, {0.1, 0.9}})).empty());

  CHECK(has_rule(validate(BayesNet()), "non-empty", "network"));
  const BayesNet dup({{"A", {"x", "x"}}, {"A", {"y"}}}, {});
  const auto dv = validate(dup);
  CHECK(has_rule(dv, "unique-name", "A"));
  CHECK(has_rule(dv, "unique-level", "A"));
  CHECK(has_rule(dv, "one-table", "A"));
}

TEST_CASE("a self loop and a missing table are reported") {
  const BayesNet net({{"A", {"a0", "a1"}}, {"B", {"b0"}}},
                     {Cpt(Cpt::Unchecked{}, "A", {"a0", "a1"}, {"A"}, {{"a0", "a1"}}, Cpt::Table::Constant(2, 2, 0.5))});
  const auto vs = validate(net);
  CHECK(has_rule(vs, "acyclic", "A -> A"));
  CHECK(has_rule(vs, "one-table", "B"));
}

TEST_CASE("topological order puts parents first and breaks ties by declaration") {
  const BayesNet fig5 = bundled("fig5");
  const auto order = topological_order(fig5);
  REQUIRE(order.size() == 10);
  std::vector<std::size_t> pos(10);
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (const auto& e : fig5.edges()) CHECK(pos[e.parent] < pos[e.child]);
  CHECK(order.front() == fig5.id("X1"));

  const BayesNet broken = read_model(*bundled_fixture("broken_model"));
  CHECK_THROWS_AS(topological_order(broken), DomainError);
}

TEST_CASE("ancestral sets") {
  const BayesNet fig5 = bundled("fig5");
  CHECK(fig5.names(ancestral_set(fig5, std::vector<std::string>{"X1", "X9"})) ==
        std::vector<std::string>{"X1", "X2", "X3", "X4", "X5", "X7", "X9"});
  CHECK(ancestral_set(fig5, VarSet{fig5.id("X1")}) == VarSet{fig5.id("X1")});
  CHECK_THROWS_AS(ancestral_set(fig5, VarSet{99}), DomainError);
}

TEST_CASE("induced subnet of a parent-closed set validates") {
  const BayesNet fig5 = bundled("fig5");
  const VarSet keep = ancestral_set(fig5, std::vector<std::string>{"X9"});
  const BayesNet sub = induced_subnet(fig5, keep);
  CHECK(validate(sub).empty());
  CHECK(sub.size() == keep.size());
  CHECK_THROWS_AS(induced_subnet(fig5, VarSet{fig5.id("X9")}), DomainError);
}

TEST_CASE("property: random networks validate and order topologically") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = case_rng(21, i);
    const BayesNet net = random_net(rng);
    CHECK(validate(net).empty());
    const auto order = topological_order(net);
    std::vector<std::size_t> pos(net.size());
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    for (const auto& e : net.edges()) CHECK(pos[e.parent] < pos[e.child]);
    for (VarId v = 0; v < net.size(); ++v)
      for (VarId d : net.descendants(v)) CHECK(pos[v] < pos[d]);
  }
}
