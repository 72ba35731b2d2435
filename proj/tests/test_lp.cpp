#include <doctest.h>

#include <algorithm>
#include <random>

#include "mrf/lp.hpp"

using namespace mrf;

TEST_CASE("single variable box") {
    LinearProgram lp;
    lp.sense = Sense::maximize;
    lp.add_variable("x");
    lp.objective["x"] = rat(1);
    lp.add_constraint("cap", {{"x", rat(1)}}, Rel::le, rat(3));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == 3);
    check_certificates(lp, sol);
}

TEST_CASE("shared budget dual") {
    LinearProgram lp;
    lp.sense = Sense::maximize;
    lp.add_variable("x");
    lp.add_variable("y");
    lp.objective["x"] = rat(1);
    lp.objective["y"] = rat(1);
    lp.add_constraint("budget", {{"x", rat(1)}, {"y", rat(1)}}, Rel::le, rat(1));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == 1);
    CHECK(sol.dual.at("budget") == 1);
    check_certificates(lp, sol);
}

TEST_CASE("infeasible and unbounded") {
    LinearProgram lp;
    lp.sense = Sense::minimize;
    lp.add_variable("x", std::nullopt, std::nullopt);
    lp.add_constraint("lo", {{"x", rat(1)}}, Rel::ge, rat(1));
    lp.add_constraint("hi", {{"x", rat(1)}}, Rel::le, rat(0));
    CHECK(solve_lp(lp).status == LpStatus::infeasible);

    LinearProgram ub;
    ub.sense = Sense::maximize;
    ub.add_variable("x");
    ub.objective["x"] = rat(1);
    CHECK(solve_lp(ub).status == LpStatus::unbounded);

    LinearProgram box;
    box.sense = Sense::maximize;
    box.add_variable("x", rat(2), rat(1));
    box.objective["x"] = rat(1);
    CHECK(solve_lp(box).status == LpStatus::infeasible);
}

TEST_CASE("equality constraints and free variables") {
    // min |x - 2| modeled with free x split into constraints
    LinearProgram lp;
    lp.sense = Sense::minimize;
    lp.add_variable("x", std::nullopt, std::nullopt);
    lp.add_variable("y");
    lp.objective["y"] = rat(1);
    lp.add_constraint("eq", {{"x", rat(1)}, {"y", rat(-1)}}, Rel::eq, rat(2));
    lp.add_constraint("cap", {{"x", rat(1)}}, Rel::le, rat(5, 2));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == 0);
    CHECK(sol.primal.at("x") == 2);
    check_certificates(lp, sol);
}

TEST_CASE("negative lower bounds and upper-only variables") {
    LinearProgram lp;
    lp.sense = Sense::minimize;
    lp.add_variable("x", rat(-3), rat(7));
    lp.add_variable("y", std::nullopt, rat(4));
    lp.objective["x"] = rat(1);
    lp.objective["y"] = rat(-1);
    lp.add_constraint("link", {{"x", rat(1)}, {"y", rat(1)}}, Rel::ge, rat(-1));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    // x = -3 is forced? link: x + y >= -1 with y maximized at 4 -> x >= -5, so x = -3, y = 4
    CHECK(sol.value == rat(-7));
    check_certificates(lp, sol);
}

TEST_CASE("degenerate LP terminates") {
    // classic cycling-prone construction; Bland fallback must terminate
    LinearProgram lp;
    lp.sense = Sense::minimize;
    for (const char* v : {"x1", "x2", "x3", "x4"}) lp.add_variable(v);
    lp.objective = {{"x1", rat(-3, 4)}, {"x2", rat(150)}, {"x3", rat(-1, 50)}, {"x4", rat(6)}};
    lp.add_constraint("r1",
                      {{"x1", rat(1, 4)}, {"x2", rat(-60)}, {"x3", rat(-1, 25)}, {"x4", rat(9)}},
                      Rel::le, rat(0));
    lp.add_constraint("r2",
                      {{"x1", rat(1, 2)}, {"x2", rat(-90)}, {"x3", rat(-1, 50)}, {"x4", rat(3)}},
                      Rel::le, rat(0));
    lp.add_constraint("r3", {{"x3", rat(1)}}, Rel::le, rat(1));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == rat(-1, 20));
    check_certificates(lp, sol);
}

TEST_CASE("permutation invariance") {
    std::mt19937_64 rng(7);
    LinearProgram lp;
    lp.sense = Sense::maximize;
    for (int i = 0; i < 6; ++i) lp.add_variable("v" + std::to_string(i), rat(0), rat(3));
    for (int i = 0; i < 6; ++i) lp.objective["v" + std::to_string(i)] = rat(1 + (i * 7) % 5);
    for (int c = 0; c < 5; ++c) {
        std::map<std::string, Rat> row;
        for (int i = 0; i < 6; ++i)
            if ((rng() >> 16) % 3 != 0) row["v" + std::to_string(i)] = rat(1 + (rng() >> 16) % 4);
        lp.add_constraint("c" + std::to_string(c), row, Rel::le, rat(5 + (rng() >> 16) % 7));
    }
    auto base = solve_lp(lp);
    REQUIRE(base.status == LpStatus::optimal);
    check_certificates(lp, base);

    LinearProgram perm = lp;
    std::reverse(perm.variables.begin(), perm.variables.end());
    std::reverse(perm.constraints.begin(), perm.constraints.end());
    auto p = solve_lp(perm);
    REQUIRE(p.status == LpStatus::optimal);
    CHECK(p.value == base.value);
    check_certificates(perm, p);
}

TEST_CASE("malformed LPs rejected") {
    LinearProgram lp;
    lp.add_variable("x");
    lp.add_variable("x");
    CHECK_THROWS_AS(solve_lp(lp), ValidationError);

    LinearProgram lp2;
    lp2.add_variable("x");
    lp2.add_constraint("c", {{"nope", rat(1)}}, Rel::le, rat(1));
    CHECK_THROWS_AS(solve_lp(lp2), ValidationError);
}

TEST_CASE("dump is readable") {
    LinearProgram lp;
    lp.sense = Sense::minimize;
    lp.add_variable("x", rat(0), rat(1));
    lp.objective["x"] = rat(2);
    lp.add_constraint("c", {{"x", rat(1)}}, Rel::ge, rat(1, 2));
    std::string text = dump_lp(lp);
    CHECK(text.find("minimize") != std::string::npos);
    CHECK(text.find("1/2") != std::string::npos);
    CHECK(text.find("x <= 1") != std::string::npos);
}
