#include "cbd/lp.hpp"

#include <string>

#include "cbd/errors.hpp"

namespace cbd {
namespace {

// Dense tableau. Columns are structural variables, then slack/surplus, then
// artificials; the extra trailing column of each row is the rhs. The reduced
// cost row is kept separately, with the objective value in z.
struct Tableau {
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> cost;
    Rat z;
    std::vector<std::size_t> basis;
    std::size_t cols = 0;
    std::size_t first_artificial = 0;
};

void pivot(Tableau& t, std::size_t r, std::size_t c) {
    auto& prow = t.rows[r];
    if (prow[c] != 1) {
        Rat inv = prow[c];
        for (auto& v : prow) {
            if (v != 0) v /= inv;
        }
    }
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (i == r) continue;
        Rat f = t.rows[i][c];
        if (f == 0) continue;
        auto& row = t.rows[i];
        for (std::size_t j = 0; j <= t.cols; ++j) {
            if (prow[j] != 0) row[j] -= f * prow[j];
        }
    }
    Rat f = t.cost[c];
    if (f != 0) {
        t.z += f * prow[t.cols];
        for (std::size_t j = 0; j < t.cols; ++j) {
            if (prow[j] != 0) t.cost[j] -= f * prow[j];
        }
    }
    t.basis[r] = c;
}

enum class Sweep { Optimal, Unbounded };

// Bland's rule both ways: entering is the lowest-index improving column,
// leaving breaks ratio ties by lowest basis variable index. Guarantees
// termination on the degenerate polytopes couplings produce.
Sweep run_simplex(Tableau& t, bool artificials_allowed) {
    std::size_t scan = artificials_allowed ? t.cols : t.first_artificial;
    for (;;) {
        std::size_t entering = t.cols;
        for (std::size_t j = 0; j < scan; ++j) {
            if (t.cost[j] > 0) {
                entering = j;
                break;
            }
        }
        if (entering == t.cols) return Sweep::Optimal;

        std::size_t leaving = t.rows.size();
        Rat best;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const Rat& a = t.rows[i][entering];
            if (a <= 0) continue;
            Rat ratio = t.rows[i][t.cols] / a;
            if (leaving == t.rows.size() || ratio < best ||
                (ratio == best && t.basis[i] < t.basis[leaving])) {
                leaving = i;
                best = ratio;
            }
        }
        if (leaving == t.rows.size()) return Sweep::Unbounded;
        pivot(t, leaving, entering);
    }
}

void check_dimensions(std::size_t num_vars, const std::vector<Constraint>& constraints,
                      std::size_t column_cap) {
    if (num_vars == 0) throw Error(Errc::DimensionMismatch, "linear program has no variables");
    if (num_vars > column_cap) {
        throw Error(Errc::SystemTooLarge, "LP has " + std::to_string(num_vars) +
                                              " columns, cap is " + std::to_string(column_cap));
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i].coeffs.size() != num_vars) {
            throw Error(Errc::DimensionMismatch,
                        "constraint " + std::to_string(i) + " has " +
                            std::to_string(constraints[i].coeffs.size()) + " coefficients, expected " +
                            std::to_string(num_vars));
        }
    }
}

// Builds the initial basic feasible tableau and drives phase one to
// optimality. Returns false if the constraints are infeasible.
bool phase_one(std::size_t num_vars, const std::vector<Constraint>& constraints, Tableau& t) {
    std::size_t m = constraints.size();

    // Normalize every row to rhs >= 0, flipping <= / >= as needed.
    std::vector<std::vector<Rat>> body(m);
    std::vector<Rat> rhs(m);
    std::vector<Relation> rel(m);
    for (std::size_t i = 0; i < m; ++i) {
        body[i] = constraints[i].coeffs;
        rhs[i] = constraints[i].rhs;
        rel[i] = constraints[i].rel;
        if (rhs[i] < 0) {
            for (auto& v : body[i]) v = -v;
            rhs[i] = -rhs[i];
            if (rel[i] == Relation::Le) {
                rel[i] = Relation::Ge;
            } else if (rel[i] == Relation::Ge) {
                rel[i] = Relation::Le;
            }
        }
    }

    std::size_t num_slack = 0;
    for (auto r : rel) {
        if (r != Relation::Eq) ++num_slack;
    }
    std::size_t num_artificial = 0;
    for (auto r : rel) {
        if (r != Relation::Le) ++num_artificial;
    }

    t.first_artificial = num_vars + num_slack;
    t.cols = t.first_artificial + num_artificial;
    t.rows.assign(m, {});
    t.basis.assign(m, 0);

    std::size_t slack_at = num_vars;
    std::size_t artificial_at = t.first_artificial;
    for (std::size_t i = 0; i < m; ++i) {
        auto& row = t.rows[i];
        row.assign(t.cols + 1, Rat(0));
        for (std::size_t j = 0; j < num_vars; ++j) row[j] = body[i][j];
        row[t.cols] = rhs[i];
        if (rel[i] == Relation::Le) {
            row[slack_at] = 1;
            t.basis[i] = slack_at++;
        } else if (rel[i] == Relation::Ge) {
            row[slack_at] = -1;
            ++slack_at;
            row[artificial_at] = 1;
            t.basis[i] = artificial_at++;
        } else {
            row[artificial_at] = 1;
            t.basis[i] = artificial_at++;
        }
    }

    t.cost.assign(t.cols, Rat(0));
    t.z = 0;
    if (num_artificial == 0) return true;

    // Maximize minus the artificial sum; reduced costs priced out against the
    // artificial part of the starting basis.
    for (std::size_t j = t.first_artificial; j < t.cols; ++j) t.cost[j] = -1;
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] < t.first_artificial) continue;
        t.z += -t.rows[i][t.cols];
        for (std::size_t j = 0; j < t.cols; ++j) {
            if (t.rows[i][j] != 0) t.cost[j] += t.rows[i][j];
        }
    }

    run_simplex(t, true);
    if (t.z != 0) return false;

    // Pivot leftover artificials out of the basis; rows that cannot be
    // repaired are redundant and get dropped.
    for (std::size_t i = 0; i < t.rows.size();) {
        if (t.basis[i] < t.first_artificial) {
            ++i;
            continue;
        }
        std::size_t j = 0;
        while (j < t.first_artificial && t.rows[i][j] == 0) ++j;
        if (j < t.first_artificial) {
            pivot(t, i, j);
            ++i;
        } else {
            t.rows.erase(t.rows.begin() + std::ptrdiff_t(i));
            t.basis.erase(t.basis.begin() + std::ptrdiff_t(i));
        }
    }
    return true;
}

std::vector<Rat> structural_solution(const Tableau& t, std::size_t num_vars) {
    std::vector<Rat> x(num_vars, Rat(0));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.basis[i] < num_vars) x[t.basis[i]] = t.rows[i][t.cols];
    }
    return x;
}

}  // namespace

LpOutcome solve(const LinearProgram& lp, std::size_t column_cap) {
    check_dimensions(lp.num_vars, lp.constraints, column_cap);
    if (lp.objective.size() != lp.num_vars) {
        throw Error(Errc::DimensionMismatch, "objective has " + std::to_string(lp.objective.size()) +
                                                 " coefficients, expected " +
                                                 std::to_string(lp.num_vars));
    }

    Tableau t;
    if (!phase_one(lp.num_vars, lp.constraints, t)) {
        return {LpStatus::Infeasible, Rat(0), {}};
    }

    t.cost.assign(t.cols, Rat(0));
    for (std::size_t j = 0; j < lp.num_vars; ++j) t.cost[j] = lp.objective[j];
    t.z = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.basis[i] >= lp.num_vars) continue;
        Rat f = lp.objective[t.basis[i]];
        if (f == 0) continue;
        t.z += f * t.rows[i][t.cols];
        for (std::size_t j = 0; j < t.cols; ++j) {
            if (t.rows[i][j] != 0) t.cost[j] -= f * t.rows[i][j];
        }
    }

    if (run_simplex(t, false) == Sweep::Unbounded) {
        return {LpStatus::Unbounded, Rat(0), {}};
    }

    LpOutcome out;
    out.status = LpStatus::Optimal;
    out.solution = structural_solution(t, lp.num_vars);
    out.value = 0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        if (lp.objective[j] != 0) out.value += lp.objective[j] * out.solution[j];
    }
    return out;
}

FeasibilityResult check_feasible(std::size_t num_vars, const std::vector<Constraint>& constraints,
                                 std::size_t column_cap) {
    check_dimensions(num_vars, constraints, column_cap);
    Tableau t;
    if (!phase_one(num_vars, constraints, t)) return {false, {}};
    return {true, structural_solution(t, num_vars)};
}

}  // namespace cbd
