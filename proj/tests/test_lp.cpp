#include <doctest.h>

#include <random>

#include "cbd/errors.hpp"
#include "cbd/lp.hpp"
#include "generators.hpp"

using namespace cbd;

namespace {

bool satisfies(const std::vector<Rat>& x, const Constraint& c) {
    Rat lhs(0);
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
    switch (c.rel) {
        case Relation::Eq: return lhs == c.rhs;
        case Relation::Le: return lhs <= c.rhs;
        case Relation::Ge: return lhs >= c.rhs;
    }
    return false;
}

bool satisfies_all(const std::vector<Rat>& x, const std::vector<Constraint>& cs) {
    for (const auto& c : cs) {
        if (!satisfies(x, c)) return false;
    }
    for (const auto& v : x) {
        if (v < 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("one-variable bound") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {Rat(1)};
    lp.constraints = {{{Rat(1)}, Relation::Le, Rat(1)}};
    LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == 1);
    CHECK(out.solution == std::vector<Rat>{Rat(1)});
}

TEST_CASE("equality pins the objective") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {Rat(1), Rat(1)};
    lp.constraints = {{{Rat(1), Rat(1)}, Relation::Eq, make_rat(1, 2)},
                      {{Rat(1), Rat(0)}, Relation::Le, make_rat(1, 3)}};
    LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == make_rat(1, 2));
    CHECK(satisfies_all(out.solution, lp.constraints));
}

TEST_CASE("contradictory equalities are infeasible") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {Rat(0)};
    lp.constraints = {{{Rat(1)}, Relation::Eq, Rat(1)}, {{Rat(1)}, Relation::Eq, Rat(0)}};
    CHECK(solve(lp).status == LpStatus::Infeasible);

    auto feas = check_feasible(1, {{{Rat(1)}, Relation::Eq, Rat(2)}, {{Rat(1)}, Relation::Le, Rat(1)}});
    CHECK_FALSE(feas.feasible);
}

TEST_CASE("unbounded detection") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {Rat(1), Rat(0)};
    lp.constraints = {{{Rat(0), Rat(1)}, Relation::Le, Rat(1)}};
    CHECK(solve(lp).status == LpStatus::Unbounded);

    lp.objective = {Rat(-1), Rat(0)};
    LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == 0);
}

TEST_CASE("greater-equal rows and negative rhs normalization") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {Rat(-1), Rat(-1)};
    lp.constraints = {{{Rat(1), Rat(1)}, Relation::Ge, Rat(3)},
                      {{Rat(-1), Rat(0)}, Relation::Ge, Rat(-2)}};
    LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == -3);
    CHECK(satisfies_all(out.solution, lp.constraints));
}

TEST_CASE("feasibility witness") {
    auto feas = check_feasible(2, {{{Rat(1), Rat(1)}, Relation::Eq, Rat(1)}});
    REQUIRE(feas.feasible);
    CHECK(satisfies_all(feas.witness, {{{Rat(1), Rat(1)}, Relation::Eq, Rat(1)}}));
}

TEST_CASE("degenerate cycling example terminates at the known optimum") {
    // The classic 3-constraint cycling instance; non-Bland pivoting loops
    // forever on it.
    LinearProgram lp;
    lp.num_vars = 4;
    lp.objective = {make_rat(3, 4), Rat(-150), make_rat(1, 50), Rat(-6)};
    lp.constraints = {
        {{make_rat(1, 4), Rat(-60), make_rat(-1, 25), Rat(9)}, Relation::Le, Rat(0)},
        {{make_rat(1, 2), Rat(-90), make_rat(-1, 50), Rat(3)}, Relation::Le, Rat(0)},
        {{Rat(0), Rat(0), Rat(1), Rat(0)}, Relation::Le, Rat(1)},
    };
    LpOutcome out = solve(lp);
    REQUIRE(out.status == LpStatus::Optimal);
    CHECK(out.value == make_rat(1, 20));
    CHECK(out.solution == std::vector<Rat>{make_rat(1, 25), Rat(0), Rat(1), Rat(0)});
    CHECK(satisfies_all(out.solution, lp.constraints));
}

TEST_CASE("dimension and size guards") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {Rat(1)};
    CHECK_THROWS_AS(solve(lp), Error);

    lp.objective = {Rat(1), Rat(1)};
    lp.constraints = {{{Rat(1)}, Relation::Eq, Rat(1)}};
    CHECK_THROWS_AS(solve(lp), Error);

    lp.constraints.clear();
    CHECK_THROWS_AS(solve(lp, 1), Error);
}

TEST_CASE("random LPs: optimal solutions satisfy constraints, runs are deterministic") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> rel_pick(0, 2);
    int optimal_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        LinearProgram lp;
        lp.num_vars = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        for (std::size_t j = 0; j < lp.num_vars; ++j) lp.objective.push_back(Rat(coeff(rng)));
        std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        for (std::size_t i = 0; i < rows; ++i) {
            Constraint c;
            for (std::size_t j = 0; j < lp.num_vars; ++j) c.coeffs.push_back(Rat(coeff(rng)));
            c.rel = static_cast<Relation>(rel_pick(rng));
            c.rhs = Rat(coeff(rng));
            lp.constraints.push_back(std::move(c));
        }
        LpOutcome out = solve(lp);
        if (out.status == LpStatus::Optimal) {
            ++optimal_seen;
            CHECK(satisfies_all(out.solution, lp.constraints));
            LpOutcome again = solve(lp);
            CHECK(again.value == out.value);
            CHECK(again.solution == out.solution);
        }
        auto feas = check_feasible(lp.num_vars, lp.constraints);
        CHECK(feas.feasible == (out.status != LpStatus::Infeasible));
        if (feas.feasible) CHECK(satisfies_all(feas.witness, lp.constraints));
    }
    CHECK(optimal_seen > 10);
}
