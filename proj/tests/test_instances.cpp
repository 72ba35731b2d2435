#include <doctest.h>

#include "mrf/instances.hpp"

using namespace mrf;

namespace {

Arc unit(const std::string& id, const std::string& tail, const std::string& head) {
    return Arc{id, tail, head, rat(1), false};
}

// The coloring-gadget shape: b bundles in series between s and t.
Digraph bundles(const std::vector<int>& sizes) {
    std::vector<std::string> nodes;
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i <= sizes.size(); ++i) nodes.push_back("z" + std::to_string(i));
    for (std::size_t i = 0; i < sizes.size(); ++i)
        for (int j = 0; j < sizes[i]; ++j)
            arcs.push_back(unit("b" + std::to_string(i) + "_" + std::to_string(j),
                                "z" + std::to_string(i), "z" + std::to_string(i + 1)));
    return Digraph::build(nodes, arcs);
}

}  // namespace

TEST_CASE("rational parse/format") {
    CHECK(rat_str(rat(3, 6)) == "1/2");
    CHECK(rat_str(rat(-4, 2)) == "-2");
    CHECK(*rat_parse("7/3") == rat(7, 3));
    CHECK(*rat_parse("-5") == rat(-5));
    CHECK(!rat_parse("3/0"));
    CHECK(!rat_parse("1.5"));
    CHECK(!rat_parse("3/6", /*strict=*/true));
    CHECK(*rat_parse("3/6", /*strict=*/false) == rat(1, 2));
}

TEST_CASE("digraph validation") {
    CHECK_THROWS_AS(Digraph::build({"a"}, {unit("x", "a", "a")}), ValidationError);
    CHECK_THROWS_AS(Digraph::build({"a"}, {unit("x", "a", "b")}), ValidationError);
    CHECK_THROWS_AS(Digraph::build({"a", "b"}, {unit("x", "a", "b"), unit("x", "b", "a")}),
                    ValidationError);
    Digraph g = Digraph::build({"s", "t"}, {unit("a2", "s", "t"), unit("a1", "s", "t")});
    CHECK(g.arc(0).id == "a1");  // sorted by id
    CHECK(g.out_arcs("s").size() == 2);
    CHECK(!Digraph::build({"a", "b"}, {unit("x", "a", "b"), unit("y", "b", "a")}).is_dag());
}

TEST_CASE("path enumeration") {
    Digraph one = Digraph::build({"s", "t"}, {unit("a", "s", "t")});
    auto paths = enumerate_st_paths(one, "s", "t");
    REQUIRE(paths.size() == 1);
    CHECK(path_arc_ids(one, paths[0]) == std::vector<std::string>{"a"});

    Digraph two = Digraph::build({"s", "t"}, {unit("a", "s", "t"), unit("b", "s", "t")});
    CHECK(enumerate_st_paths(two, "s", "t").size() == 2);

    // product of bundle sizes
    CHECK(enumerate_st_paths(bundles({3, 3, 3}), "z0", "z3").size() == 27);
    CHECK(enumerate_st_paths(bundles({2, 3, 4}), "z0", "z3").size() == 24);

    CHECK(enumerate_st_paths(bundles({2}), "z1", "z0").empty());
    CHECK_THROWS_AS(enumerate_st_paths(bundles({3, 3, 3}), "z0", "z3", 10), ResourceLimitError);
}

TEST_CASE("scenario enumeration") {
    Digraph g = bundles({3});
    CHECK(enumerate_scenarios(g, 2, ScenarioMode::exactly_k).size() == 3);
    CHECK_THROWS_AS(enumerate_scenarios(g, 4, ScenarioMode::exactly_k), ValidationError);

    CompatGraph h({{"b0_0", "b0_1"}});
    auto cliques = enumerate_scenarios(g, 2, ScenarioMode::at_most_k, &h);
    CHECK(cliques.size() == 5);  // empty set, 3 singletons, 1 pair
    CHECK(cliques[0].empty());

    // complete compat graph == unrestricted at_most_k
    CompatGraph full({{"b0_0", "b0_1"}, {"b0_0", "b0_2"}, {"b0_1", "b0_2"}});
    CHECK(enumerate_scenarios(g, 2, ScenarioMode::at_most_k, &full) ==
          enumerate_scenarios(g, 2, ScenarioMode::at_most_k));

    // immune arcs are never interdicted
    Digraph gi = Digraph::build(
        {"s", "t"}, {unit("a", "s", "t"), Arc{"b", "s", "t", rat(2), true}});
    auto sc = enumerate_scenarios(gi, 1, ScenarioMode::exactly_k);
    REQUIRE(sc.size() == 1);
    CHECK(gi.arc(sc[0][0]).id == "a");
}

TEST_CASE("loss and arc_flow") {
    Digraph g = bundles({2, 2});
    auto paths = enumerate_st_paths(g, "z0", "z2");
    REQUIRE(paths.size() == 4);
    PathFlow zero;
    CHECK(loss(zero, {0, 1}) == 0);

    Digraph two = Digraph::build({"s", "t"}, {unit("a", "s", "t"), unit("b", "s", "t")});
    PathFlow f;
    f.add(path_from_ids(two, {"a"}), rat(1));
    f.add(path_from_ids(two, {"b"}), rat(1));
    CHECK(loss(f, {two.arc_index("a")}) == 1);
    CHECK(arc_flow(f, two.arc_index("a")) == 1);
    CHECK(f.total() == 2);

    // a scenario containing two arcs of one path counts the path once
    Digraph chain = Digraph::build({"s", "u", "t"}, {unit("a", "s", "u"), unit("b", "u", "t")});
    PathFlow cf;
    cf.add(path_from_ids(chain, {"a", "b"}), rat(1));
    Scenario both = {chain.arc_index("a"), chain.arc_index("b")};
    CHECK(loss(cf, both) == 1);
}

TEST_CASE("loss monotonicity and arc-flow bound on random-ish flows") {
    Digraph g = bundles({2, 3, 2});
    auto paths = enumerate_st_paths(g, "z0", "z3");
    PathFlow f;
    int i = 0;
    for (const Path& p : paths) f.add(p, rat(1 + (i++ % 3), 7));
    auto scen = enumerate_scenarios(g, 2, ScenarioMode::exactly_k);
    for (const Scenario& s : scen) {
        for (int a : s) CHECK(loss(f, {a}) <= loss(f, s));
        Rat bound = 0;
        for (int a : s) bound += arc_flow(f, a);
        CHECK(loss(f, s) <= bound);
    }
}

TEST_CASE("feasibility checks") {
    Digraph two = Digraph::build({"s", "t"}, {unit("a", "s", "t"), unit("b", "s", "t")});
    MrfInstance inst{two, "s", "t", 1, std::nullopt};
    inst.validate();
    PathFlow f;
    f.add(path_from_ids(two, {"a"}), rat(3, 2));
    std::string why;
    CHECK(!is_feasible(f, inst, &why));
    CHECK(why.find("a") != std::string::npos);
    PathFlow ok;
    ok.add(path_from_ids(two, {"a"}), rat(1));
    CHECK(is_feasible(ok, inst));

    // wrong endpoints
    PathFlow bad;
    bad.add(Path{{two.arc_index("a")}, ""}, rat(1));
    Digraph chain = Digraph::build({"s", "u", "t"}, {unit("c", "s", "u"), unit("d", "u", "t")});
    MrfInstance inst2{chain, "s", "t", 1, std::nullopt};
    PathFlow half;
    half.add(Path{{chain.arc_index("c")}, ""}, rat(1));
    CHECK(!is_feasible(half, inst2));
}

TEST_CASE("multicommodity feasibility") {
    Digraph g = Digraph::build({"s1", "t1"}, {unit("a", "s1", "t1"), unit("b", "s1", "t1")});
    MrfMInstance inst{g, 1, {Commodity{"c0", "s1", "t1", rat(2)}}, "c0"};
    inst.validate();
    PathFlow f;
    f.add(path_from_ids(g, {"a"}, "c0"), rat(1));
    std::string why;
    CHECK(!is_feasible(f, inst, &why));  // demand not met
    f.add(path_from_ids(g, {"b"}, "c0"), rat(1));
    CHECK(is_feasible(f, inst, &why));
}

TEST_CASE("topological arc order") {
    Digraph chain = Digraph::build({"s", "u", "t"}, {unit("a", "s", "u"), unit("b", "u", "t")});
    auto order = topological_arc_order(chain);
    // later arcs are larger: b must come after a
    CHECK(chain.arc(order[0]).id == "a");
    CHECK(chain.arc(order[1]).id == "b");

    Digraph two = Digraph::build({"s", "t"}, {unit("y", "s", "t"), unit("x", "s", "t")});
    auto o2 = topological_arc_order(two);
    CHECK(two.arc(o2[0]).id == "x");  // ties by id

    // a1,a2 parallel upstream of a3,a4 parallel
    Digraph fig = Digraph::build({"s", "v", "t"}, {unit("a1", "s", "v"), unit("a2", "s", "v"),
                                                   unit("a3", "v", "t"), unit("a4", "v", "t")});
    auto o3 = topological_arc_order(fig);
    CHECK(fig.arc(o3[0]).id == "a1");
    CHECK(fig.arc(o3[1]).id == "a2");
    CHECK(fig.arc(o3[2]).id == "a3");
    CHECK(fig.arc(o3[3]).id == "a4");

    // forced-last arcs go last regardless of id
    Digraph withst = Digraph::build({"s", "u", "t"}, {unit("a", "s", "u"), unit("b", "u", "t"),
                                                      unit("a0", "s", "t")});
    auto o4 = topological_arc_order(withst, {"a0"});
    CHECK(withst.arc(o4[2]).id == "a0");

    Digraph cyc = Digraph::build({"a", "b"}, {unit("x", "a", "b"), unit("y", "b", "a")});
    CHECK_THROWS_AS(topological_arc_order(cyc), ValidationError);
}

TEST_CASE("instance validation") {
    Digraph g = bundles({2});
    MrfRInstance r{g, "z0", "z1", 2, CompatGraph{}, rat(1), false, {}};
    r.validate();
    MrfRInstance bad = r;
    bad.demand = rat(-1);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    Digraph capg = Digraph::build({"s", "t"}, {Arc{"a", "s", "t", rat(2), false}});
    MrfRInstance bad2{capg, "s", "t", 1, CompatGraph{}, rat(1), false, {}};
    CHECK_THROWS_AS(bad2.validate(), ValidationError);
}
